import { readdirSync, readFileSync, writeFileSync } from "fs";
import * as path from "path";

import { parsePgm } from "./pgm.js";
import { Detection, serializeLog } from "./log.js";
import { Detector, loadDetector } from "./detectors.js";

export interface AnnotateOptions {
  framesDir: string;
  outPath: string;
  model?: string;
  minScore?: number;
  classes?: string[];
}

export interface AnnotateResult {
  frames: number;
  detections: number;
  diagnostics: string[]; // one entry per frame whose inference failed
}

// Frame files are zero-padded decimal indices, contiguous from 0, mirroring
// what the downstream frame loader enforces.
export function listFrameFiles(framesDir: string): string[] {
  const names = readdirSync(framesDir).filter((n) => n.toLowerCase().endsWith(".pgm"));
  const byIndex = new Map<number, string>();
  for (const name of names) {
    const stem = name.slice(0, -4);
    if (!/^\d+$/.test(stem)) {
      throw new Error(`frame filename is not a decimal index: ${name}`);
    }
    const index = parseInt(stem, 10);
    if (byIndex.has(index)) {
      throw new Error(`duplicate frame index ${index}: ${byIndex.get(index)} and ${name}`);
    }
    byIndex.set(index, name);
  }
  if (byIndex.size === 0) {
    throw new Error(`no frames found in ${framesDir}`);
  }
  const ordered: string[] = [];
  for (let i = 0; i < byIndex.size; i++) {
    const name = byIndex.get(i);
    if (name === undefined) {
      throw new Error(`frame sequence has a gap: index ${i} missing in ${framesDir}`);
    }
    ordered.push(path.join(framesDir, name));
  }
  return ordered;
}

export function annotateWithDetector(
  opts: AnnotateOptions,
  detector: Detector,
): AnnotateResult {
  const minScore = opts.minScore ?? 0;
  if (minScore < 0 || minScore > 1) {
    throw new Error(`min-score must be in [0, 1], got ${minScore}`);
  }
  const classFilter = opts.classes && opts.classes.length ? new Set(opts.classes) : null;
  const files = listFrameFiles(opts.framesDir);

  const perFrame: Detection[][] = [];
  const diagnostics: string[] = [];
  let total = 0;
  for (let index = 0; index < files.length; index++) {
    let dets: Detection[];
    try {
      const image = parsePgm(readFileSync(files[index]));
      dets = detector(image, index);
    } catch (err) {
      diagnostics.push(`frame ${index} (${path.basename(files[index])}): ${(err as Error).message}`);
      dets = [];
    }
    dets = dets.filter((d) => d.score >= minScore && (!classFilter || classFilter.has(d.class)));
    total += dets.length;
    perFrame.push(dets);
  }

  writeFileSync(opts.outPath, serializeLog(perFrame), "utf-8");
  return { frames: perFrame.length, detections: total, diagnostics };
}

export function annotate(opts: AnnotateOptions): AnnotateResult {
  const detector = loadDetector(opts.model ?? "stub");
  return annotateWithDetector(opts, detector);
}
