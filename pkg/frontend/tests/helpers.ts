import { readFileSync } from "node:fs";
import { join } from "node:path";
import { PNG } from "pngjs";

const FIXTURES = join(__dirname, "fixtures");

export function fixtureBytes(name: string): Uint8Array {
  return new Uint8Array(readFileSync(join(FIXTURES, name)));
}

export function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

export interface DecodedPng {
  data: Uint8ClampedArray;
  width: number;
  height: number;
}

export function fixturePng(name: string): DecodedPng {
  const png = PNG.sync.read(readFileSync(join(FIXTURES, name)));
  return {
    data: new Uint8ClampedArray(png.data),
    width: png.width,
    height: png.height,
  };
}
