"""JSON documents for models, measures, couplings, instances and results.

Numbers that must stay exact (weights, coordinates) travel as strings such as
``"1/3"`` or ``"0.25"``; JSON integers and floats are accepted on input and
parsed through their decimal text.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .exceptions import InputError
from .measure import Coupling, DiscreteMeasure
from .spacetime import CausalGraphModel, MinkowskiModel, SpacetimeModel, to_fraction
from .transport import Certificate, LWResult, PrecedenceResult

__all__ = [
    "Instance",
    "exact_str",
    "coord_str",
    "distance_str",
    "model_from_doc",
    "model_to_doc",
    "measure_from_doc",
    "measure_to_doc",
    "coupling_from_doc",
    "coupling_to_doc",
    "certificate_to_doc",
    "precedence_to_doc",
    "lw_to_doc",
    "dumps",
]


def exact_str(x: Fraction) -> str:
    return str(Fraction(x))


def coord_str(x: Fraction):
    """Integers as JSON ints, terminating decimals as decimal strings, else ``p/q``."""
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    den, twos, fives = x.denominator, 0, 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return str(x)
    digits = max(twos, fives)
    scaled = abs(x.numerator) * 10**digits // x.denominator
    sign = "-" if x < 0 else ""
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def distance_str(x) -> str:
    """Distances with 12 significant digits; ``"inf"`` for ``+∞``."""
    x = float(x)
    if math.isinf(x):
        return "inf"
    return format(x, ".12g")


def _require(doc: dict, key: str, what: str):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{what} document is missing '{key}'")
    return doc[key]


def model_from_doc(doc: dict) -> SpacetimeModel:
    kind = _require(doc, "type", "model")
    if kind == "minkowski":
        events = _require(doc, "events", "model")
        return MinkowskiModel(events, spatial_dim=int(_require(doc, "spatial_dim", "model")))
    if kind == "graph":
        edges = []
        for e in _require(doc, "edges", "model"):
            if len(e) != 4:
                raise InputError(f"graph edge needs [src, dst, weight, kind], got {e!r}")
            edges.append(tuple(e))
        return CausalGraphModel(int(_require(doc, "n", "model")), edges)
    raise InputError(f"unknown model type {kind!r}")


def model_to_doc(model: SpacetimeModel) -> dict:
    if isinstance(model, MinkowskiModel):
        return {
            "type": "minkowski",
            "spatial_dim": model.spatial_dim,
            "events": [[coord_str(c) for c in row] for row in model.coords],
        }
    if isinstance(model, CausalGraphModel):
        return {
            "type": "graph",
            "n": model.n,
            "edges": [[e.src, e.dst, exact_str(e.weight), e.kind] for e in model.edges],
        }
    raise InputError(f"cannot serialize {type(model).__name__}")


def measure_from_doc(doc: dict) -> DiscreteMeasure:
    atoms = _require(doc, "atoms", "measure")
    try:
        pairs = [(int(p), to_fraction(w)) for p, w in atoms]
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed measure atoms: {exc}") from exc
    return DiscreteMeasure(pairs)


def measure_to_doc(mu: DiscreteMeasure) -> dict:
    return {"atoms": [[p, exact_str(w)] for p, w in mu.atoms()]}


def coupling_from_doc(doc: dict) -> Coupling:
    entries = _require(doc, "entries", "coupling")
    try:
        triples = [(int(p), int(q), to_fraction(w)) for p, q, w in entries]
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed coupling entries: {exc}") from exc
    return Coupling(triples)


def coupling_to_doc(omega: Coupling) -> dict:
    return {"entries": [[p, q, exact_str(w)] for (p, q), w in omega.items()]}


def certificate_to_doc(cert: Certificate) -> dict:
    return {
        "K": sorted(cert.generator),
        "F": sorted(cert.violating_set),
        "mu_F": exact_str(cert.mu_mass),
        "nu_F": exact_str(cert.nu_mass),
    }


def precedence_to_doc(result: PrecedenceResult) -> dict:
    if result.feasible:
        return {"status": "feasible", "coupling": coupling_to_doc(result.coupling)}
    return {"status": "infeasible", "certificate": certificate_to_doc(result.certificate)}


def lw_to_doc(result: LWResult) -> dict:
    doc = {"lw": distance_str(result.value), "s": result.s}
    if result.coupling is not None:
        doc["optimal_coupling"] = {
            "entries": [[p, q, distance_str(w)] for (p, q), w in sorted(result.coupling.items())]
        }
    return doc


@dataclass
class Instance:
    """A model plus named measures on it."""

    model: SpacetimeModel
    measures: dict = field(default_factory=dict)

    @classmethod
    def from_doc(cls, doc: dict) -> "Instance":
        model = model_from_doc(_require(doc, "model", "instance"))
        measures = {}
        for label, mdoc in doc.get("measures", {}).items():
            measures[label] = measure_from_doc(mdoc).validate(model)
        return cls(model, measures)

    def to_doc(self) -> dict:
        return {
            "model": model_to_doc(self.model),
            "measures": {k: measure_to_doc(v) for k, v in self.measures.items()},
        }

    @classmethod
    def load(cls, path) -> "Instance":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: malformed JSON ({exc})") from exc
        except OSError as exc:
            raise InputError(f"{path}: {exc.strerror or exc}") from exc
        return cls.from_doc(doc)

    def measure(self, label: str) -> DiscreteMeasure:
        try:
            return self.measures[label]
        except KeyError:
            known = ", ".join(sorted(self.measures)) or "none"
            raise InputError(f"unknown measure label {label!r} (known: {known})") from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
