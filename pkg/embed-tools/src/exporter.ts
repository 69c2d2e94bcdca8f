/**
 * Export one embedding vector per dataset sample as vector JSONL
 * ({"id", "vec"}), the format the augmentarium core imports directly.
 */

import { loadEncoder, Pooling } from "./encoder.js";
import { loadDataset, writeJsonl } from "./jsonl.js";

export interface ExporterConfig {
  model: string;
  batchSize: number;
  maxChars: number;
  pooling: Pooling;
}

export const EXPORT_DEFAULTS: ExporterConfig = {
  model: "hash:512",
  batchSize: 16,
  maxChars: 300,
  pooling: "mean",
};

export async function exportEmbeddings(
  inPath: string,
  outPath: string,
  config: Partial<ExporterConfig> = {},
): Promise<{ count: number; dim: number }> {
  const cfg = { ...EXPORT_DEFAULTS, ...config };
  const dataset = loadDataset(inPath);
  if (dataset.length === 0) {
    throw new Error(`${inPath}: dataset is empty`);
  }
  const encoder = await loadEncoder(cfg.model, cfg.pooling);

  const records: Array<{ id: string; vec: number[] }> = [];
  let dim = -1;
  for (let start = 0; start < dataset.length; start += cfg.batchSize) {
    const batch = dataset.slice(start, start + cfg.batchSize);
    const texts = batch.map((r) => r.text.toLowerCase().slice(0, cfg.maxChars));
    const vectors = await encoder.embed(texts);
    vectors.forEach((vec, i) => {
      if (dim === -1) {
        dim = vec.length;
      } else if (vec.length !== dim) {
        throw new Error(
          `encoder returned dim ${vec.length} for ${batch[i].id}, expected ${dim}`,
        );
      }
      if (!vec.every(Number.isFinite)) {
        throw new Error(`non-finite embedding for ${batch[i].id}`);
      }
      records.push({ id: batch[i].id, vec });
    });
  }
  writeJsonl(outPath, records);
  return { count: records.length, dim };
}
