// Portable graymap reader/writer. P5 (binary) and P2 (ASCII), maxval <= 255.

export interface GrayImage {
  width: number;
  height: number;
  pixels: Uint8Array; // row-major, length width * height
}

function isSpace(byte: number): boolean {
  return byte === 0x20 || byte === 0x09 || byte === 0x0a || byte === 0x0d || byte === 0x0c || byte === 0x0b;
}

// Reads header tokens, skipping whitespace and '#' comments that run to end of line.
class TokenReader {
  pos = 0;
  constructor(private data: Buffer) {}

  next(): string {
    while (this.pos < this.data.length) {
      const b = this.data[this.pos];
      if (isSpace(b)) {
        this.pos++;
      } else if (b === 0x23) {
        while (this.pos < this.data.length && this.data[this.pos] !== 0x0a) this.pos++;
      } else {
        break;
      }
    }
    if (this.pos >= this.data.length) throw new Error("unexpected end of PGM header");
    const start = this.pos;
    while (this.pos < this.data.length && !isSpace(this.data[this.pos])) this.pos++;
    return this.data.subarray(start, this.pos).toString("ascii");
  }
}

function headerInt(reader: TokenReader, what: string): number {
  const token = reader.next();
  if (!/^\d+$/.test(token)) throw new Error(`invalid PGM ${what}: ${token}`);
  return parseInt(token, 10);
}

export function parsePgm(data: Buffer): GrayImage {
  const reader = new TokenReader(data);
  const magic = reader.next();
  if (magic !== "P5" && magic !== "P2") {
    throw new Error(`not a PGM file (magic ${magic})`);
  }
  const width = headerInt(reader, "width");
  const height = headerInt(reader, "height");
  const maxval = headerInt(reader, "maxval");
  if (width < 1 || height < 1) throw new Error(`invalid PGM size ${width}x${height}`);
  if (maxval < 1 || maxval > 255) throw new Error(`unsupported PGM maxval ${maxval}`);

  const count = width * height;
  const pixels = new Uint8Array(count);
  if (magic === "P5") {
    const start = reader.pos + 1; // exactly one whitespace byte after maxval
    if (data.length - start < count) {
      throw new Error(`truncated PGM raster: need ${count} bytes, have ${data.length - start}`);
    }
    pixels.set(data.subarray(start, start + count));
  } else {
    for (let i = 0; i < count; i++) {
      const value = headerInt(reader, "sample");
      if (value > maxval) throw new Error(`PGM sample ${value} exceeds maxval ${maxval}`);
      pixels[i] = value;
    }
  }
  return { width, height, pixels };
}

export function encodePgm(image: GrayImage): Buffer {
  const { width, height, pixels } = image;
  if (pixels.length !== width * height) {
    throw new Error(`pixel count ${pixels.length} does not match ${width}x${height}`);
  }
  const header = Buffer.from(`P5\n${width} ${height}\n255\n`, "ascii");
  return Buffer.concat([header, Buffer.from(pixels)]);
}
