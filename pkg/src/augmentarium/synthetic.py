"""Synthetic two-class Gaussian blob data for harness checks and demos."""

from .corpus import Dataset, Sample
from .rng import derive_rng


def two_blob_dataset(n: int, dim: int = 8, separation: float = 1.0, seed: int = 0,
                     name: str = "blobs"):
    """A balanced two-class dataset with unit-variance Gaussian vectors.

    Class c is centered at (-1)^(c+1) * separation along every axis, so
    the center distance is 2 * separation * sqrt(dim). Returns the
    Dataset plus an id -> vector mapping, ready for the imported-vectors
    path of the pipeline.
    """
    rng = derive_rng(seed, "two-blobs")
    samples = []
    vectors = {}
    for i in range(n):
        label = i % 2
        center = separation if label == 1 else -separation
        sid = f"b{i:05d}"
        samples.append(Sample(id=sid, text=f"blob point {i} class {label}", label=label))
        vectors[sid] = center + rng.normal(0.0, 1.0, size=dim)
    return Dataset(name, 2, samples), vectors


__all__ = ["two_blob_dataset"]
