// MSB-first bit reader over the bytecode body.

export class TruncatedStream extends Error {}

export class BitReader {
  private pos = 0;

  constructor(private readonly data: Uint8Array) {}

  remaining(): number {
    return this.data.length * 8 - this.pos;
  }

  restIsZero(): boolean {
    for (let i = this.pos; i < this.data.length * 8; i++) {
      if ((this.data[i >> 3] >> (7 - (i & 7))) & 1) return false;
    }
    return true;
  }

  readBit(): number {
    if (this.pos >= this.data.length * 8) {
      throw new TruncatedStream("ran out of bits");
    }
    const bit = (this.data[this.pos >> 3] >> (7 - (this.pos & 7))) & 1;
    this.pos += 1;
    return bit;
  }

  readUint(width: number): number {
    let value = 0;
    for (let i = 0; i < width; i++) {
      value = value * 2 + this.readBit();
    }
    return value;
  }
}
