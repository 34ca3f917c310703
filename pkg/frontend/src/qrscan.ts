// QR payload extraction from pixels. Locating and decoding delegates to
// jsQR; the raw byte-mode payload (binaryData) is what the VM consumes.

import jsQR from "jsqr";

export function decodePixels(
  data: Uint8ClampedArray,
  width: number,
  height: number,
): Uint8Array | null {
  const result = jsQR(data, width, height);
  if (!result || !result.binaryData) return null;
  return Uint8Array.from(result.binaryData);
}

export function decodeImageData(image: ImageData): Uint8Array | null {
  return decodePixels(image.data, image.width, image.height);
}
