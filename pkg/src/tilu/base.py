"""Types shared by every learning-unlearning scheme."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, NamedTuple, Sequence

from .bits import Bits
from .domain import ConceptClass, Dataset, Example
from .errors import ClassMismatchError, OneShotError, TicketError


class Verdict(enum.Enum):
    TOP = "⊤"
    BOTTOM = "⊥"

    def __str__(self):
        return self.value


class Deletion(NamedTuple):
    index: int
    example: Example
    ticket: Bits


@dataclass
class LearnOutput:
    scheme: str
    cls: ConceptClass | None
    result: Any
    aux: Bits
    tickets: list
    _spent: bool = field(default=False, repr=False, compare=False)

    @property
    def hypothesis(self):
        return self.result

    @property
    def n(self) -> int:
        return len(self.tickets)

    @property
    def aux_bits(self) -> int:
        return self.aux.length

    @property
    def max_ticket_bits(self) -> int:
        return max((t.length for t in self.tickets), default=0)

    def request(self, data: Dataset, indices: Sequence[int]) -> list[Deletion]:
        return [Deletion(i, data[i], self.tickets[i]) for i in indices]

    def claim(self):
        """Mark this learn output as consumed by its single unlearning request."""
        if self._spent:
            raise OneShotError("this learn output has already been unlearned once")
        self._spent = True


def check_deletions(deletions: Sequence[Deletion], n: int):
    seen = set()
    for d in deletions:
        if not 0 <= d.index < n:
            raise TicketError(f"index {d.index} outside 0..{n - 1}")
        if d.index in seen:
            raise TicketError(f"index {d.index} requested twice")
        seen.add(d.index)


class Scheme:
    """A learning-unlearning scheme.

    `learn` returns the result plus serialized aux and tickets; `unlearn`
    sees only the serialized aux, the deleted examples with their tickets,
    and the public dataset size n.
    """

    id: str = ""
    class_type: type | tuple = ConceptClass

    def __init__(self, cls: ConceptClass):
        if not isinstance(cls, self.class_type):
            raise ClassMismatchError(f"{self.id} does not support {cls.descriptor()}")
        self.cls = cls

    def learn(self, data: Dataset) -> LearnOutput:
        if data.cls != self.cls:
            raise ClassMismatchError("dataset class differs from the scheme's class")
        result, aux, tickets = self._learn(data)
        assert len(tickets) == len(data)
        return LearnOutput(self.id, self.cls, result, aux, list(tickets))

    def unlearn(self, aux: Bits, deletions: Sequence[Deletion], n: int):
        check_deletions(deletions, n)
        deletions = [Deletion(d.index, Example(*d.example), d.ticket) for d in deletions]
        try:
            return self._unlearn(aux, deletions, n)
        except ValueError as e:
            raise TicketError(f"malformed aux or ticket: {e}") from e

    def _learn(self, data: Dataset):
        raise NotImplementedError

    def _unlearn(self, aux: Bits, deletions: list, n: int):
        raise NotImplementedError
