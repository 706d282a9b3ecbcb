"""One entry point for every scheme: look up by id, learn, unlearn once."""
from __future__ import annotations

from typing import Callable, Sequence

from .agnostic import AgnosticThresholdScheme, RealizabilityScheme
from .base import Deletion, LearnOutput, Scheme
from .central import AugmentedPointScheme, CentralThresholdScheme, NoRepetitionPointScheme
from .chain import ChainScheme
from .ctz import CtzScheme
from .domain import ConceptClass, Dataset
from .errors import ClassMismatchError, UnknownSchemeError
from .sharp import PointScheme, ProductThresholdScheme, SharpThresholdScheme, ValueScheme
from .tree import TreeScheme

MERGEABLE_KINDS = ("thresholds", "prodthresh", "parities", "explicit")


def _mergeable(factory, kind):
    def make(cls):
        if cls.kind != kind:
            raise ClassMismatchError(f"{factory.__name__} for {kind} got a {cls.kind} class")
        return factory(cls)
    return make


REGISTRY: dict[str, Callable[[ConceptClass], Scheme]] = {
    **{f"tree:{k}": _mergeable(TreeScheme, k) for k in MERGEABLE_KINDS},
    **{f"chain:{k}": _mergeable(ChainScheme, k) for k in MERGEABLE_KINDS},
    "central:thresholds": CentralThresholdScheme,
    "central:augpoint": AugmentedPointScheme,
    "central:noreppoint": NoRepetitionPointScheme,
    "sharp:point": PointScheme,
    "sharp:minval": lambda cls: ValueScheme(cls, lowest=True),
    "sharp:maxval": lambda cls: ValueScheme(cls, lowest=False),
    "sharp:prodthresh": ProductThresholdScheme,
    "sharp:thresholds": SharpThresholdScheme,
    "agnostic:thresholds": AgnosticThresholdScheme,
    "realizability:thresholds": RealizabilityScheme,
    "ctz": CtzScheme,
}

SCHEME_IDS = tuple(REGISTRY)


def base_id(scheme_id: str) -> str:
    """Drop a trailing parameter note, e.g. 'tree:prodthresh(d=2,m=3)'."""
    return scheme_id.split("(", 1)[0].strip()


def make_scheme(scheme_id: str, cls: ConceptClass) -> Scheme:
    try:
        factory = REGISTRY[base_id(scheme_id)]
    except KeyError:
        raise UnknownSchemeError(f"unknown scheme id {scheme_id!r}") from None
    return factory(cls)


def run_learn(scheme_id: str, data: Dataset) -> LearnOutput:
    return make_scheme(scheme_id, data.cls).learn(data)


def run_unlearn(scheme_id: str, request: Sequence[Deletion], output: LearnOutput):
    """Unlearn against a prior learn output; each output accepts one request."""
    scheme = make_scheme(scheme_id, output.cls)
    if scheme.id != output.scheme:
        raise UnknownSchemeError(f"output came from {output.scheme}, not {scheme_id}")
    output.claim()
    return scheme.unlearn(output.aux, request, output.n)
