"""On-disk cache of full-path bases, keyed by the canonical graph text."""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .errors import ConsistencyError
from .fullpath import FullPathClass, HFBasis, PathOutcome, SpincBasis, hf_basis
from .jsonio import SCHEMA_VERSION, frac, unfrac
from .plumbing import StarGraph
from .spinc import maslov_grading, spinc_class_of, spinc_classes

ENV_VAR = "PLUMBFLOER_CACHE"


def _stamp() -> str:
    from . import __version__

    return f"{__version__}+schema{SCHEMA_VERSION}"


def cache_key(g: StarGraph) -> str:
    return hashlib.sha256(g.to_text().encode()).hexdigest()


def encode_basis(basis: HFBasis) -> dict:
    return {
        "per_spinc": [
            {
                "spinc": list(b.spinc.representative),
                "dropped": b.dropped,
                "classes": [
                    {
                        "initial": list(c.initial),
                        "steps": list(c.outcome.steps),
                        "terminal": list(c.terminal),
                        "maslov": frac(c.maslov),
                    }
                    for c in b.classes
                ],
            }
            for b in basis
        ],
        "metadata": dict(sorted(basis.metadata.items())),
    }


def decode_basis(g: StarGraph, obj: dict) -> HFBasis:
    form = g.form
    per = {s: SpincBasis(s, []) for s in spinc_classes(form)}
    for entry in obj["per_spinc"]:
        s = spinc_class_of(tuple(entry["spinc"]), form)
        per[s].dropped = entry["dropped"]
        for c in entry["classes"]:
            out = PathOutcome(tuple(c["initial"]), tuple(c["steps"]), tuple(c["terminal"]))
            m = unfrac(c["maslov"])
            if maslov_grading(out.start, form) != m or out.vectors(form)[-1] != out.end:
                raise ConsistencyError("cached class does not replay", initial=out.start)
            per[s].classes.append(FullPathClass(s, out, Fraction(m)))
    return HFBasis(form, per, g, dict(obj["metadata"]))


class BasisCache:
    """Directory of JSON files ``<sha256>.json`` holding encoded bases."""

    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def path(self, g: StarGraph) -> Path:
        return self.dir / f"{cache_key(g)}.json"

    def load(self, g: StarGraph) -> HFBasis | None:
        p = self.path(g)
        try:
            obj = json.loads(p.read_text())
        except (OSError, ValueError):
            return None
        if obj.get("version") != _stamp() or obj.get("graph") != g.to_text():
            return None
        return decode_basis(g, obj["basis"])

    def store(self, g: StarGraph, basis: HFBasis) -> None:
        doc = {"version": _stamp(), "graph": g.to_text(), "basis": encode_basis(basis)}
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
        os.replace(tmp, self.path(g))

    def basis(self, g: StarGraph) -> HFBasis:
        cached = self.load(g)
        if cached is not None:
            self.hits += 1
            return cached
        self.misses += 1
        b = hf_basis(g)
        self.store(g, b)
        return b


def get_basis(g: StarGraph, cache: BasisCache | None = None) -> HFBasis:
    return cache.basis(g) if cache is not None else hf_basis(g)
