/**
 * Sentence encoders behind one interface.
 *
 * `hash:<dim>` is a deterministic offline stand-in (signed token hashing,
 * L2-normalized) so the export pipeline and its file contract can run
 * without any model download. Any other model id is treated as a
 * transformers.js feature-extraction model and loaded lazily; install
 * `@xenova/transformers` to enable it.
 */

import { fnv1a } from "./rng.js";

export type Pooling = "mean" | "cls";

export interface Encoder {
  readonly model: string;
  embed(texts: string[]): Promise<number[][]>;
}

export function hashEncoder(dim: number): Encoder {
  if (!Number.isInteger(dim) || dim < 2) {
    throw new Error(`hash encoder dim must be an integer >= 2, got ${dim}`);
  }
  return {
    model: `hash:${dim}`,
    async embed(texts: string[]): Promise<number[][]> {
      return texts.map((text) => {
        const vec = new Array<number>(dim).fill(0);
        for (const token of text.toLowerCase().split(/\s+/).filter(Boolean)) {
          const h = fnv1a(token);
          const bucket = h % dim;
          const sign = (fnv1a(token, 0x1000193) & 1) === 0 ? 1 : -1;
          vec[bucket] += sign;
        }
        const norm = Math.hypot(...vec);
        return norm > 0 ? vec.map((v) => v / norm) : vec;
      });
    },
  };
}

async function transformersModule(): Promise<any> {
  const name = "@xenova/transformers";
  try {
    return await import(name);
  } catch (err) {
    throw new Error(
      `model backend unavailable: install ${name} to use transformer models ` +
        `(${(err as Error).message})`,
    );
  }
}

export async function loadEncoder(model: string, pooling: Pooling = "mean"):
    Promise<Encoder> {
  if (model.startsWith("hash:")) {
    return hashEncoder(Number.parseInt(model.slice(5), 10));
  }
  const { pipeline } = await transformersModule();
  const extractor = await pipeline("feature-extraction", model);
  return {
    model,
    async embed(texts: string[]): Promise<number[][]> {
      const output = await extractor(texts, { pooling, normalize: true });
      const data: number[] = Array.from(output.data as Iterable<number>);
      const [batch, dim] = output.dims as [number, number];
      const vectors: number[][] = [];
      for (let i = 0; i < batch; i++) {
        vectors.push(data.slice(i * dim, (i + 1) * dim));
      }
      return vectors;
    },
  };
}
