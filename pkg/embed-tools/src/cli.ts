#!/usr/bin/env node
/**
 * embed-tools CLI.
 *
 *   export         dataset JSONL -> vector JSONL ({"id", "vec"})
 *   back-translate dataset JSONL -> adapter JSONL (method back_tr)
 *   fill-mask      dataset JSONL -> adapter JSONL (method imf)
 *   generate       dataset JSONL -> adapter JSONL (method gpt_gen)
 *
 * Model ids: "hash:<dim>" (export) and "mock" (adapters) are built-in
 * deterministic offline backends; anything else loads a transformers.js
 * pipeline and requires @xenova/transformers to be installed.
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { AdapterKind, runAdapter } from "./adapters.js";
import { exportEmbeddings } from "./exporter.js";

const USAGE = `usage:
  embed-tools export         --in <dataset.jsonl> --out <vectors.jsonl>
                             [--model hash:512] [--batch 16] [--max-chars 300]
                             [--pooling mean|cls]
  embed-tools back-translate --in <dataset.jsonl> --out <adapter.jsonl>
                             [--model mock] [--rate 1.0] [--seed 0]
  embed-tools fill-mask      --in <dataset.jsonl> --out <adapter.jsonl>
                             [--model mock] [--rate 1.0] [--seed 0]
  embed-tools generate       --in <dataset.jsonl> --out <adapter.jsonl>
                             [--model mock] [--rate 1.0] [--seed 0]`;

const ADAPTER_COMMANDS: Record<string, AdapterKind> = {
  "back-translate": "back_tr",
  "fill-mask": "imf",
  generate: "gpt_gen",
};

function parsed(argv: string[]) {
  return parseArgs({
    args: argv,
    options: {
      in: { type: "string" },
      out: { type: "string" },
      model: { type: "string" },
      batch: { type: "string" },
      "max-chars": { type: "string" },
      pooling: { type: "string" },
      rate: { type: "string" },
      seed: { type: "string" },
    },
    strict: true,
  }).values;
}

function requireIo(values: { in?: string; out?: string }): { inPath: string; outPath: string } {
  if (!values.in || !values.out) {
    throw new Error("--in and --out are required");
  }
  return { inPath: values.in, outPath: values.out };
}

export async function main(argv: string[]): Promise<number> {
  const [command, ...rest] = argv;
  try {
    if (command === "export") {
      const values = parsed(rest);
      const { inPath, outPath } = requireIo(values);
      const pooling = values.pooling ?? "mean";
      if (pooling !== "mean" && pooling !== "cls") {
        throw new Error(`--pooling must be mean or cls, got ${pooling}`);
      }
      const { count, dim } = await exportEmbeddings(inPath, outPath, {
        model: values.model ?? "hash:512",
        batchSize: values.batch ? Number.parseInt(values.batch, 10) : 16,
        maxChars: values["max-chars"] ? Number.parseInt(values["max-chars"], 10) : 300,
        pooling,
      });
      console.log(`wrote ${count} vectors (dim ${dim}) -> ${outPath}`);
      return 0;
    }
    if (command in ADAPTER_COMMANDS) {
      const values = parsed(rest);
      const { inPath, outPath } = requireIo(values);
      const { written, skipped } = await runAdapter(
        ADAPTER_COMMANDS[command], inPath, outPath,
        {
          model: values.model ?? "mock",
          rate: values.rate ? Number.parseFloat(values.rate) : 1.0,
          seed: values.seed ? Number.parseInt(values.seed, 10) : 0,
        },
      );
      console.log(`wrote ${written} records (${skipped} skipped) -> ${outPath}`);
      return 0;
    }
    console.error(USAGE);
    return 1;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;

if (invokedDirectly) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
