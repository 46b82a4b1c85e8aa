import hashlib
import json
from typing import Any, Iterable, Sequence

import numpy as np


def canonical_hash(facets: Iterable[Sequence[int]]) -> str:
    """SHA-256 of the sorted facet list, serialized as compact JSON."""
    payload = json.dumps(sorted(list(map(int, f)) for f in facets), separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Seeded generator; extra integers select an independent stream for the same seed."""
    return np.random.default_rng([int(seed), *map(int, stream)])


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False)
