#!/usr/bin/env python3
"""Write the synthetic two-blob dataset and its vectors as JSONL files.

The output pair feeds the imported-vectors path of the pipeline and the
spec files under scripts/.
"""

import argparse
from pathlib import Path

from augmentarium.corpus import save_dataset, save_vectors
from augmentarium.synthetic import two_blob_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--dim", type=int, default=8)
    ap.add_argument("--separation", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--outdir", default="data")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    ds, vectors = two_blob_dataset(args.n, args.dim, args.separation, args.seed)
    ds_path = outdir / "blobs.jsonl"
    vec_path = outdir / "blobs.vec.jsonl"
    save_dataset(ds, ds_path)
    save_vectors(vectors, vec_path)
    print(f"wrote {len(ds)} samples -> {ds_path}")
    print(f"wrote {len(vectors)} vectors (dim {args.dim}) -> {vec_path}")


if __name__ == "__main__":
    main()
