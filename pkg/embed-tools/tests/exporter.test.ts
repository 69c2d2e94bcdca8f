import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { hashEncoder, loadEncoder } from "../src/encoder.js";
import { exportEmbeddings } from "../src/exporter.js";
import { loadDataset, readJsonl } from "../src/jsonl.js";

function tempDataset(n = 10): { dir: string; path: string } {
  const dir = mkdtempSync(join(tmpdir(), "embed-tools-"));
  const path = join(dir, "dataset.jsonl");
  const lines = Array.from({ length: n }, (_, i) =>
    JSON.stringify({
      id: `d${String(i).padStart(2, "0")}`,
      text: `sample text number ${i} with a few shared words`,
      label: i % 2,
    }),
  );
  writeFileSync(path, lines.join("\n") + "\n");
  return { dir, path };
}

describe("hash encoder", () => {
  it("produces unit-norm vectors of the requested dim", async () => {
    const encoder = hashEncoder(32);
    const [vec] = await encoder.embed(["hello world again"]);
    expect(vec).toHaveLength(32);
    const norm = Math.hypot(...vec);
    expect(norm).toBeCloseTo(1.0, 9);
  });

  it("is deterministic", async () => {
    const encoder = hashEncoder(16);
    const [a] = await encoder.embed(["the same text"]);
    const [b] = await encoder.embed(["the same text"]);
    expect(a).toEqual(b);
  });

  it("returns the zero vector for empty text", async () => {
    const encoder = hashEncoder(8);
    const [vec] = await encoder.embed([""]);
    expect(vec).toEqual(new Array(8).fill(0));
  });

  it("rejects a dim below 2", () => {
    expect(() => hashEncoder(1)).toThrow(/dim/);
  });

  it("resolves from a model id", async () => {
    const encoder = await loadEncoder("hash:24");
    expect(encoder.model).toBe("hash:24");
  });
});

describe("exportEmbeddings", () => {
  it("emits one constant-dim record per sample, ids matching", async () => {
    const { dir, path } = tempDataset(10);
    const out = join(dir, "vectors.jsonl");
    const { count, dim } = await exportEmbeddings(path, out, { model: "hash:64" });
    expect(count).toBe(10);
    expect(dim).toBe(64);

    const records = readJsonl(out) as Array<{ id: string; vec: number[] }>;
    expect(records).toHaveLength(10);
    const datasetIds = loadDataset(path).map((r) => r.id);
    expect(records.map((r) => r.id)).toEqual(datasetIds);
    for (const rec of records) {
      expect(rec.vec).toHaveLength(64);
      expect(rec.vec.every(Number.isFinite)).toBe(true);
    }
  });

  it("is byte-identical across runs", async () => {
    const { dir, path } = tempDataset(6);
    const outA = join(dir, "a.jsonl");
    const outB = join(dir, "b.jsonl");
    await exportEmbeddings(path, outA, { model: "hash:32", batchSize: 4 });
    await exportEmbeddings(path, outB, { model: "hash:32", batchSize: 2 });
    expect(readFileSync(outA, "utf-8")).toBe(readFileSync(outB, "utf-8"));
  });

  it("rejects an empty dataset", async () => {
    const dir = mkdtempSync(join(tmpdir(), "embed-tools-"));
    const path = join(dir, "empty.jsonl");
    writeFileSync(path, "");
    await expect(
      exportEmbeddings(path, join(dir, "out.jsonl"), { model: "hash:8" }),
    ).rejects.toThrow(/empty/);
  });

  it("fails clearly when the transformer backend is missing", async () => {
    const { dir, path } = tempDataset(2);
    await expect(
      exportEmbeddings(path, join(dir, "out.jsonl"), { model: "no-such/model" }),
    ).rejects.toThrow(/backend unavailable|Cannot find|model/);
  });
});
