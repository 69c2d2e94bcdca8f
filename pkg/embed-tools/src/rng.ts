/**
 * Deterministic PRNG so every export and adapter run reproduces exactly.
 * Seeds mix string/number parts through FNV-1a; draws come from
 * mulberry32. Never use Math.random here.
 */

export function fnv1a(text: string, seed = 0x811c9dc5): number {
  let hash = seed >>> 0;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

export interface Rng {
  /** uniform float in [0, 1) */
  next(): number;
  /** uniform integer in [lo, hi) */
  int(lo: number, hi: number): number;
  pick<T>(items: readonly T[]): T;
}

export function makeRng(...parts: Array<string | number>): Rng {
  let seed = 0x9e3779b9;
  for (const part of parts) {
    seed = fnv1a(String(part), seed ^ 0x811c9dc5);
  }
  let state = seed >>> 0;
  const next = () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
  return {
    next,
    int(lo: number, hi: number): number {
      if (hi <= lo) throw new RangeError(`empty range [${lo}, ${hi})`);
      return lo + Math.floor(next() * (hi - lo));
    },
    pick<T>(items: readonly T[]): T {
      if (items.length === 0) throw new RangeError("cannot pick from empty array");
      return items[Math.floor(next() * items.length)];
    },
  };
}
