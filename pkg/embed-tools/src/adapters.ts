/**
 * Offline augmentation adapters: read a dataset JSONL, rewrite each text
 * with a model backend, and write adapter JSONL records
 * {"parent_id", "method", "text"} for the augmentarium core to import.
 * Generative records carry an extra "split" field (the prefix length the
 * continuation was grown from); the core importer ignores unknown fields.
 */

import { DatasetRecord, loadDataset, writeJsonl } from "./jsonl.js";
import { makeRng, Rng } from "./rng.js";
import {
  mockBackTranslator,
  mockGenerator,
  mockMaskFiller,
  realBackTranslator,
  realGenerator,
  realMaskFiller,
} from "./textmodels.js";

export type AdapterKind = "back_tr" | "imf" | "gpt_gen";

export interface AdapterConfig {
  model: string;
  rate: number;
  seed: number;
  maxChars: number;
}

export const ADAPTER_DEFAULTS: AdapterConfig = {
  model: "mock",
  rate: 1.0,
  seed: 0,
  maxChars: 300,
};

export interface AdapterRecord {
  parent_id: string;
  method: AdapterKind;
  text: string;
  split?: number;
}

export interface AdapterResult {
  written: number;
  skipped: number;
}

/** Total round(rate*N) replicas, spread evenly with the remainder going
 * to the earliest parents. */
export function replicaCounts(n: number, rate: number): number[] {
  const total = Math.round(rate * n);
  const base = Math.floor(total / n);
  const extra = total - base * n;
  return Array.from({ length: n }, (_, i) => base + (i < extra ? 1 : 0));
}

type Rewrite = (record: DatasetRecord, rng: Rng) => Promise<AdapterRecord>;

function vocabularyOf(records: DatasetRecord[]): string[] {
  const vocab = new Set<string>();
  for (const rec of records) {
    for (const token of rec.text.split(/\s+/).filter(Boolean)) {
      vocab.add(token);
    }
  }
  return [...vocab].sort();
}

async function buildRewrite(
  kind: AdapterKind,
  cfg: AdapterConfig,
  records: DatasetRecord[],
): Promise<Rewrite> {
  const mock = cfg.model === "mock";
  if (kind === "back_tr") {
    const translate = mock
      ? mockBackTranslator()
      : await realBackTranslator(cfg.model);
    return async (rec, rng) => ({
      parent_id: rec.id,
      method: "back_tr",
      text: await translate(rec.text, rng),
    });
  }
  if (kind === "imf") {
    const fill = mock
      ? mockMaskFiller(vocabularyOf(records))
      : await realMaskFiller(cfg.model);
    return async (rec, rng) => ({
      parent_id: rec.id,
      method: "imf",
      text: await fill(rec.text, rng),
    });
  }
  const generate = mock
    ? mockGenerator(vocabularyOf(records))
    : await realGenerator(cfg.model);
  return async (rec, rng) => {
    // split the text at a uniform point in [80, 120] characters (clamped
    // for shorter texts), keep the prefix, generate the rest
    const drawn = rng.int(80, 121);
    const split = Math.min(drawn, rec.text.length);
    const prefix = rec.text.slice(0, split);
    const continuation = await generate(prefix, rng);
    const joined = continuation ? `${prefix} ${continuation}` : prefix;
    return {
      parent_id: rec.id,
      method: "gpt_gen",
      text: joined.slice(0, Math.max(cfg.maxChars, split)),
      split,
    };
  };
}

export async function runAdapter(
  kind: AdapterKind,
  inPath: string,
  outPath: string,
  config: Partial<AdapterConfig> = {},
): Promise<AdapterResult> {
  const cfg = { ...ADAPTER_DEFAULTS, ...config };
  if (cfg.rate <= 0) throw new Error(`rate must be positive, got ${cfg.rate}`);
  const records = loadDataset(inPath);
  if (records.length === 0) throw new Error(`${inPath}: dataset is empty`);

  const rewrite = await buildRewrite(kind, cfg, records);
  const counts = replicaCounts(records.length, cfg.rate);
  const out: AdapterRecord[] = [];
  let skipped = 0;
  for (let i = 0; i < records.length; i++) {
    for (let replica = 0; replica < counts[i]; replica++) {
      const rng = makeRng(cfg.seed, kind, records[i].id, replica);
      try {
        out.push(await rewrite(records[i], rng));
      } catch (err) {
        skipped += 1;
        console.error(
          `skip ${records[i].id} replica ${replica}: ${(err as Error).message}`,
        );
      }
    }
  }
  writeJsonl(outPath, out);
  if (skipped > 0) {
    console.error(`${kind}: skipped ${skipped} record(s)`);
  }
  return { written: out.length, skipped };
}
