import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import * as path from "path";

import { describe, expect, test } from "vitest";

import { annotate, annotateWithDetector } from "../src/annotate.js";
import { stubDetector } from "../src/detectors.js";
import { encodePgm } from "../src/pgm.js";

function makeFrames(count: number, width = 32, height = 24): string {
  const dir = mkdtempSync(path.join(tmpdir(), "frames-"));
  for (let i = 0; i < count; i++) {
    const pixels = new Uint8Array(width * height).fill(40);
    writeFileSync(path.join(dir, `${String(i).padStart(6, "0")}.pgm`), encodePgm({ width, height, pixels }));
  }
  return dir;
}

function outFile(): string {
  return path.join(mkdtempSync(path.join(tmpdir(), "out-")), "detections.jsonl");
}

describe("annotate", () => {
  test("ten frames produce exactly ten lines, frame field 0..9", () => {
    const out = outFile();
    const result = annotate({ framesDir: makeFrames(10), outPath: out });
    expect(result.frames).toBe(10);
    const lines = readFileSync(out, "utf-8").split("\n").filter((l) => l.length);
    expect(lines.length).toBe(10);
    lines.forEach((line, i) => {
      const obj = JSON.parse(line);
      expect(obj.frame).toBe(i);
      expect(Array.isArray(obj.detections)).toBe(true);
    });
  });

  test("stub detections are identical on every frame", () => {
    const out = outFile();
    annotate({ framesDir: makeFrames(5), outPath: out, model: "stub" });
    const lines = readFileSync(out, "utf-8").trim().split("\n");
    const bodies = lines.map((l) => JSON.stringify(JSON.parse(l).detections));
    expect(new Set(bodies).size).toBe(1);
    expect(JSON.parse(lines[0]).detections.length).toBe(2);
  });

  test("empty directory fails and writes nothing", () => {
    const dir = mkdtempSync(path.join(tmpdir(), "frames-"));
    const out = outFile();
    expect(() => annotate({ framesDir: dir, outPath: out })).toThrow(/no frames/);
    expect(existsSync(out)).toBe(false);
  });

  test("index gap is rejected", () => {
    const dir = makeFrames(3);
    writeFileSync(path.join(dir, "000005.pgm"), encodePgm({ width: 4, height: 4, pixels: new Uint8Array(16) }));
    expect(() => annotate({ framesDir: dir, outPath: outFile() })).toThrow(/gap: index 3/);
  });

  test("non-decimal filename is rejected", () => {
    const dir = makeFrames(2);
    writeFileSync(path.join(dir, "frame-a.pgm"), encodePgm({ width: 4, height: 4, pixels: new Uint8Array(16) }));
    expect(() => annotate({ framesDir: dir, outPath: outFile() })).toThrow(/decimal index/);
  });

  test("min-score drops the stub's low-score detection", () => {
    const out = outFile();
    const result = annotate({ framesDir: makeFrames(3), outPath: out, minScore: 0.6 });
    expect(result.detections).toBe(3); // one of two per frame survives
    const first = JSON.parse(readFileSync(out, "utf-8").split("\n")[0]);
    expect(first.detections.length).toBe(1);
    expect(first.detections[0].class).toBe("car");
  });

  test("class filter keeps only the listed labels", () => {
    const out = outFile();
    annotate({ framesDir: makeFrames(3), outPath: out, classes: ["person"] });
    const first = JSON.parse(readFileSync(out, "utf-8").split("\n")[0]);
    expect(first.detections.length).toBe(1);
    expect(first.detections[0].class).toBe("person");
  });

  test("per-frame inference failure yields a diagnostic and an empty frame", () => {
    const out = outFile();
    const flaky = (image: Parameters<ReturnType<typeof stubDetector>>[0], index: number) => {
      if (index === 3) throw new Error("inference backend crashed");
      return stubDetector()(image, index);
    };
    const result = annotateWithDetector({ framesDir: makeFrames(6), outPath: out }, flaky);
    expect(result.diagnostics.length).toBe(1);
    expect(result.diagnostics[0]).toMatch(/frame 3/);
    expect(result.diagnostics[0]).toMatch(/inference backend crashed/);
    const lines = readFileSync(out, "utf-8").trim().split("\n").map((l) => JSON.parse(l));
    expect(lines.length).toBe(6);
    expect(lines[3].detections).toEqual([]);
    expect(lines[2].detections.length).toBe(2);
  });

  test("deterministic: two runs produce identical bytes", () => {
    const dir = makeFrames(4);
    const a = outFile();
    const b = outFile();
    annotate({ framesDir: dir, outPath: a, model: "blob" });
    annotate({ framesDir: dir, outPath: b, model: "blob" });
    expect(readFileSync(a)).toEqual(readFileSync(b));
  });
});
