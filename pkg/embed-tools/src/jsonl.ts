/** JSONL reading/writing shared by the exporter and the adapters. */

import { readFileSync, writeFileSync } from "node:fs";

export function readJsonl(path: string): unknown[] {
  const out: unknown[] = [];
  const lines = readFileSync(path, "utf-8").split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    try {
      out.push(JSON.parse(line));
    } catch (err) {
      throw new Error(`${path}:${i + 1}: invalid JSON (${(err as Error).message})`);
    }
  }
  return out;
}

export function writeJsonl(path: string, records: unknown[]): void {
  const body = records.map((r) => JSON.stringify(r)).join("\n");
  writeFileSync(path, body.length ? body + "\n" : "", { encoding: "utf-8" });
}

export interface DatasetRecord {
  id: string;
  text: string;
  label: number;
}

export function loadDataset(path: string): DatasetRecord[] {
  const records: DatasetRecord[] = [];
  const seen = new Set<string>();
  readJsonl(path).forEach((raw, index) => {
    const rec = raw as Record<string, unknown>;
    if (typeof rec.id !== "string" || typeof rec.text !== "string" ||
        typeof rec.label !== "number") {
      throw new Error(`${path}: record ${index + 1} needs string id/text and numeric label`);
    }
    if (seen.has(rec.id)) {
      throw new Error(`${path}: duplicate id ${rec.id}`);
    }
    seen.add(rec.id);
    records.push({ id: rec.id, text: rec.text, label: rec.label });
  });
  return records;
}
