import { spawnSync } from "child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import * as path from "path";
import { fileURLToPath } from "url";

import { describe, expect, test } from "vitest";

import { encodePgm } from "../src/pgm.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const cliPath = path.join(here, "..", "dist", "cli.js");

function runCli(...args: string[]) {
  return spawnSync("node", [cliPath, ...args], { encoding: "utf-8" });
}

function makeFrames(count: number): string {
  const dir = mkdtempSync(path.join(tmpdir(), "frames-"));
  for (let i = 0; i < count; i++) {
    const pixels = new Uint8Array(24 * 16).fill(50);
    writeFileSync(path.join(dir, `${String(i).padStart(6, "0")}.pgm`), encodePgm({ width: 24, height: 16, pixels }));
  }
  return dir;
}

describe("annotate CLI", () => {
  test("happy path writes the log and prints a summary", () => {
    const out = path.join(mkdtempSync(path.join(tmpdir(), "out-")), "d.jsonl");
    const result = runCli("--frames", makeFrames(4), "--out", out);
    expect(result.status).toBe(0);
    const summary = JSON.parse(result.stdout);
    expect(summary.frames).toBe(4);
    expect(summary.detections).toBe(8);
    expect(readFileSync(out, "utf-8").split("\n").filter((l) => l).length).toBe(4);
  });

  test("missing required option exits nonzero", () => {
    const result = runCli("--frames", makeFrames(1));
    expect(result.status).toBe(1);
    expect(result.stderr).toMatch(/out/);
  });

  test("empty directory exits 1 and leaves no output file", () => {
    const dir = mkdtempSync(path.join(tmpdir(), "frames-"));
    const out = path.join(mkdtempSync(path.join(tmpdir(), "out-")), "d.jsonl");
    const result = runCli("--frames", dir, "--out", out);
    expect(result.status).toBe(1);
    expect(result.stderr).toMatch(/no frames/);
    expect(existsSync(out)).toBe(false);
  });

  test("unknown model exits nonzero with a message", () => {
    const out = path.join(mkdtempSync(path.join(tmpdir(), "out-")), "d.jsonl");
    const result = runCli("--frames", makeFrames(1), "--out", out, "--model", "resnet");
    expect(result.status).toBe(1);
    expect(result.stderr).toMatch(/cannot load detector model/);
    expect(existsSync(out)).toBe(false);
  });

  test("class and score filters apply", () => {
    const out = path.join(mkdtempSync(path.join(tmpdir(), "out-")), "d.jsonl");
    const result = runCli(
      "--frames", makeFrames(2), "--out", out,
      "--classes", "car,person", "--min-score", "0.6",
    );
    expect(result.status).toBe(0);
    expect(JSON.parse(result.stdout).detections).toBe(2);
  });
});
