import { GrayImage } from "./pgm.js";
import { Detection } from "./log.js";

// One-function detector interface so tests can inject a double and no real
// model is a dependency of anything upstream.
export type Detector = (image: GrayImage, frameIndex: number) => Detection[];

// Fixed output regardless of content: the deterministic test double.
export function stubDetector(): Detector {
  return () => [
    { bbox: [4, 3, 16, 11], class: "car", score: 0.875 },
    { bbox: [20, 6, 26, 12], class: "person", score: 0.5 },
  ];
}

// Connected components over bright pixels (4-neighbour flood fill); one box
// per component, score = mean component brightness / 255.
export function blobDetector(threshold = 127): Detector {
  return (image) => {
    const { width, height, pixels } = image;
    const seen = new Uint8Array(pixels.length);
    const out: Detection[] = [];
    const stack: number[] = [];
    for (let start = 0; start < pixels.length; start++) {
      if (seen[start] || pixels[start] <= threshold) continue;
      let x1 = width, y1 = height, x2 = -1, y2 = -1;
      let sum = 0;
      let count = 0;
      stack.push(start);
      seen[start] = 1;
      while (stack.length) {
        const at = stack.pop()!;
        const x = at % width;
        const y = (at - x) / width;
        if (x < x1) x1 = x;
        if (y < y1) y1 = y;
        if (x > x2) x2 = x;
        if (y > y2) y2 = y;
        sum += pixels[at];
        count++;
        if (x > 0 && !seen[at - 1] && pixels[at - 1] > threshold) { seen[at - 1] = 1; stack.push(at - 1); }
        if (x + 1 < width && !seen[at + 1] && pixels[at + 1] > threshold) { seen[at + 1] = 1; stack.push(at + 1); }
        if (y > 0 && !seen[at - width] && pixels[at - width] > threshold) { seen[at - width] = 1; stack.push(at - width); }
        if (y + 1 < height && !seen[at + width] && pixels[at + width] > threshold) { seen[at + width] = 1; stack.push(at + width); }
      }
      out.push({
        bbox: [x1, y1, x2 + 1, y2 + 1],
        class: "object",
        score: Math.round((sum / count / 255) * 1000) / 1000,
      });
    }
    // stable order: by top-left corner
    out.sort((a, b) => a.bbox[1] - b.bbox[1] || a.bbox[0] - b.bbox[0]);
    return out;
  };
}

const MODELS: Record<string, () => Detector> = {
  stub: stubDetector,
  blob: () => blobDetector(),
};

export function loadDetector(modelId: string): Detector {
  const factory = MODELS[modelId];
  if (!factory) {
    const known = Object.keys(MODELS).join(", ");
    throw new Error(`cannot load detector model '${modelId}'; available: ${known}`);
  }
  return factory();
}
