#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { annotate } from "./annotate.js";

yargs(hideBin(process.argv))
  .scriptName("annotate")
  .command(
    "$0",
    "Run a detector over a frame directory and write a detection log",
    (y) =>
      y
        .option("frames", { type: "string", demandOption: true, describe: "Frame directory (PGM files named by index)" })
        .option("out", { type: "string", demandOption: true, describe: "Output detection-log path (JSON Lines)" })
        .option("model", { type: "string", default: "stub", describe: "Detector id (stub, blob)" })
        .option("min-score", { type: "number", default: 0, describe: "Drop detections scoring below this" })
        .option("classes", { type: "string", describe: "Comma-separated class allowlist" }),
    (argv) => {
      try {
        const result = annotate({
          framesDir: argv.frames,
          outPath: argv.out,
          model: argv.model,
          minScore: argv["min-score"],
          classes: argv.classes ? argv.classes.split(",").map((c) => c.trim()).filter(Boolean) : undefined,
        });
        for (const line of result.diagnostics) {
          console.error(`warning: ${line}`);
        }
        if (result.diagnostics.length) {
          console.error(
            `warning: inference failed on ${result.diagnostics.length} frame(s); empty detections were written for them`,
          );
        }
        console.log(
          JSON.stringify({ frames: result.frames, detections: result.detections, out: argv.out }),
        );
      } catch (err) {
        console.error(`error: ${(err as Error).message}`);
        process.exit(1);
      }
    },
  )
  .strict()
  .fail((msg, err) => {
    console.error(`error: ${msg ?? (err as Error).message}`);
    process.exit(1);
  })
  .parse();
