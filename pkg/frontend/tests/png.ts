/** Minimal PNG decoder for pixel assertions in integration tests.
 * Supports what the station emits: 8-bit RGB (color type 2),
 * non-interlaced, any scanline filter. */
import { inflateSync } from "node:zlib";

const SIGNATURE = [0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a];

export interface RgbImage {
  width: number;
  height: number;
  pixels: Uint8Array; // RGB triples, row-major
}

export function decodePng(data: Uint8Array): RgbImage {
  SIGNATURE.forEach((b, i) => {
    if (data[i] !== b) throw new Error("not a PNG");
  });
  const view = new DataView(data.buffer, data.byteOffset, data.byteLength);
  let pos = 8;
  let width = 0;
  let height = 0;
  const idat: Uint8Array[] = [];
  while (pos < data.length) {
    const length = view.getUint32(pos);
    const type = String.fromCharCode(...data.subarray(pos + 4, pos + 8));
    const body = data.subarray(pos + 8, pos + 8 + length);
    if (type === "IHDR") {
      width = view.getUint32(pos + 8);
      height = view.getUint32(pos + 12);
      const bitDepth = data[pos + 16];
      const colorType = data[pos + 17];
      const interlace = data[pos + 20];
      if (bitDepth !== 8 || colorType !== 2 || interlace !== 0) {
        throw new Error(
          `unsupported PNG: depth=${bitDepth} color=${colorType} interlace=${interlace}`
        );
      }
    } else if (type === "IDAT") {
      idat.push(body);
    } else if (type === "IEND") {
      break;
    }
    pos += 12 + length; // length + type + body + crc
  }
  const raw = inflateSync(Buffer.concat(idat.map((c) => Buffer.from(c))));
  return unfilter(new Uint8Array(raw.buffer, raw.byteOffset, raw.byteLength), width, height);
}

function paeth(a: number, b: number, c: number): number {
  const p = a + b - c;
  const pa = Math.abs(p - a);
  const pb = Math.abs(p - b);
  const pc = Math.abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

function unfilter(raw: Uint8Array, width: number, height: number): RgbImage {
  const bpp = 3;
  const stride = width * bpp;
  const pixels = new Uint8Array(stride * height);
  for (let row = 0; row < height; row++) {
    const filter = raw[row * (stride + 1)]!;
    const src = raw.subarray(row * (stride + 1) + 1, (row + 1) * (stride + 1));
    const out = pixels.subarray(row * stride, (row + 1) * stride);
    const prev = row > 0 ? pixels.subarray((row - 1) * stride, row * stride) : null;
    for (let i = 0; i < stride; i++) {
      const x = src[i]!;
      const left = i >= bpp ? out[i - bpp]! : 0;
      const up = prev ? prev[i]! : 0;
      const upLeft = prev && i >= bpp ? prev[i - bpp]! : 0;
      let value: number;
      switch (filter) {
        case 0:
          value = x;
          break;
        case 1:
          value = x + left;
          break;
        case 2:
          value = x + up;
          break;
        case 3:
          value = x + Math.floor((left + up) / 2);
          break;
        case 4:
          value = x + paeth(left, up, upLeft);
          break;
        default:
          throw new Error(`unknown PNG filter ${filter}`);
      }
      out[i] = value & 0xff;
    }
  }
  return { width, height, pixels };
}

export function hasColor(img: RgbImage, r: number, g: number, b: number): boolean {
  const { pixels } = img;
  for (let i = 0; i < pixels.length; i += 3) {
    if (pixels[i] === r && pixels[i + 1] === g && pixels[i + 2] === b) return true;
  }
  return false;
}
