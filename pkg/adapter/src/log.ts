// Detection-log serialization, byte-compatible with the fhop reader/writer:
// one JSON object per line, keys frame/detections, detection keys
// bbox/class/score, floats rendered with a trailing ".0" when integral.

export interface Detection {
  bbox: [number, number, number, number];
  class: string;
  score: number;
}

// Matches Python's repr for the value ranges a detector produces (pixel
// coordinates and [0,1] scores). Both runtimes print shortest round-trip
// decimals; the only divergence in that range is integral floats.
export function formatNumber(value: number): string {
  if (!Number.isFinite(value)) throw new Error(`non-finite number in log: ${value}`);
  return Number.isInteger(value) ? value.toFixed(1) : String(value);
}

function formatDetection(det: Detection): string {
  const bbox = det.bbox.map(formatNumber).join(", ");
  return `{"bbox": [${bbox}], "class": ${JSON.stringify(det.class)}, "score": ${formatNumber(det.score)}}`;
}

export function serializeLog(frames: Detection[][]): string {
  const lines = frames.map((dets, index) => {
    const body = dets.map(formatDetection).join(", ");
    return `{"frame": ${index}, "detections": [${body}]}`;
  });
  return lines.join("\n") + "\n";
}
