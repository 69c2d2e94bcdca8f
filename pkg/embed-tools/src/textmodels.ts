/**
 * Text-rewriting backends for the three adapters.
 *
 * The "mock" backend is a deterministic offline stand-in: it exercises
 * the adapter pipeline and file contracts without any model download,
 * and makes no claim about linguistic quality. Any other model id loads
 * transformers.js pipelines lazily (install `@xenova/transformers`).
 */

import { Rng } from "./rng.js";

export interface BackTranslator {
  (text: string, rng: Rng): Promise<string>;
}

export interface MaskFiller {
  (text: string, rng: Rng): Promise<string>;
}

export interface Generator {
  /** Continue `prefix`; returns the continuation only. */
  (prefix: string, rng: Rng): Promise<string>;
}

const tokenize = (text: string) => text.split(/\s+/).filter(Boolean);

/** Simulated translation round trip: rotate the word order. */
export function mockBackTranslator(): BackTranslator {
  return async (text, rng) => {
    const words = tokenize(text);
    if (words.length < 2) return text;
    const shift = rng.int(1, words.length);
    return [...words.slice(shift), ...words.slice(0, shift)].join(" ");
  };
}

/** Replace roughly 15% of tokens with corpus-vocabulary picks. */
export function mockMaskFiller(vocabulary: readonly string[]): MaskFiller {
  return async (text, rng) => {
    const words = tokenize(text);
    if (words.length === 0 || vocabulary.length === 0) return text;
    const replacements = Math.max(1, Math.round(0.15 * words.length));
    for (let i = 0; i < replacements; i++) {
      words[rng.int(0, words.length)] = rng.pick(vocabulary);
    }
    return words.join(" ");
  };
}

/** Append corpus-vocabulary words until about `targetChars` are added. */
export function mockGenerator(
  vocabulary: readonly string[],
  targetChars = 80,
): Generator {
  return async (_prefix, rng) => {
    if (vocabulary.length === 0) return "";
    const words: string[] = [];
    let length = 0;
    while (length < targetChars) {
      const word = rng.pick(vocabulary);
      words.push(word);
      length += word.length + 1;
    }
    return words.join(" ");
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

export async function realBackTranslator(model: string): Promise<BackTranslator> {
  const { pipeline } = await transformersModule();
  // model is the forward direction; the return leg swaps the language pair
  const forward = await pipeline("translation", model);
  const backward = await pipeline("translation", swapPair(model));
  return async (text) => {
    const there = await forward(text);
    const back = await backward(there[0].translation_text);
    return back[0].translation_text as string;
  };
}

function swapPair(model: string): string {
  // Xenova/opus-mt-en-de -> Xenova/opus-mt-de-en
  const match = model.match(/^(.*-mt-)([a-z]{2,3})-([a-z]{2,3})$/);
  if (!match) {
    throw new Error(`cannot derive the return-translation model from ${model}`);
  }
  return `${match[1]}${match[3]}-${match[2]}`;
}

export async function realMaskFiller(model: string): Promise<MaskFiller> {
  const { pipeline } = await transformersModule();
  const filler = await pipeline("fill-mask", model);
  return async (text, rng) => {
    const words = tokenize(text);
    if (words.length === 0) return text;
    const target = rng.int(0, words.length);
    const original = words[target];
    words[target] = "[MASK]";
    const predictions = await filler(words.join(" "));
    words[target] = predictions.length ? predictions[0].token_str.trim() : original;
    return words.join(" ");
  };
}

export async function realGenerator(model: string): Promise<Generator> {
  const { pipeline } = await transformersModule();
  const generate = await pipeline("text-generation", model);
  return async (prefix) => {
    const output = await generate(prefix, { max_new_tokens: 40 });
    const full = output[0].generated_text as string;
    return full.startsWith(prefix) ? full.slice(prefix.length) : full;
  };
}
