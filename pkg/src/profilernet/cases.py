"""Case records and datasets.

A solved case assigns a state to every network variable; an evidence record
assigns a subset. Datasets store cases columnar as an ``(n_cases, n_vars)``
int16 code matrix with ``MISSING`` (-1) marking unassigned cells, which keeps
counting and splitting cheap at database scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MISSING = -1


@dataclass(frozen=True)
class CaseRecord:
    """One case: variable id -> state index. ``complete`` marks solved cases."""

    values: Mapping[str, int]
    complete: bool = True

    def __post_init__(self):
        object.__setattr__(self, "values", dict(self.values))


class Dataset:
    """Ordered, immutable collection of cases over a fixed variable list."""

    __slots__ = ("variables", "codes", "_index")

    def __init__(self, variables: Sequence[str], codes: np.ndarray):
        self.variables = tuple(variables)
        codes = np.asarray(codes, dtype=np.int16)
        if codes.ndim != 2 or codes.shape[1] != len(self.variables):
            raise ValueError(
                f"codes must have shape (n, {len(self.variables)}), got {codes.shape}"
            )
        codes = codes.copy()
        codes.setflags(write=False)
        self.codes = codes
        self._index = {v: j for j, v in enumerate(self.variables)}

    @classmethod
    def from_records(cls, variables: Sequence[str], records: Iterable[CaseRecord]) -> "Dataset":
        variables = tuple(variables)
        rows = []
        for rec in records:
            rows.append([rec.values.get(v, MISSING) for v in variables])
        codes = np.array(rows, dtype=np.int16).reshape(len(rows), len(variables))
        return cls(variables, codes)

    @classmethod
    def empty(cls, variables: Sequence[str]) -> "Dataset":
        return cls(variables, np.empty((0, len(tuple(variables))), dtype=np.int16))

    def __len__(self) -> int:
        return self.codes.shape[0]

    def record(self, i: int) -> CaseRecord:
        row = self.codes[i]
        values = {v: int(row[j]) for j, v in enumerate(self.variables) if row[j] != MISSING}
        return CaseRecord(values, complete=bool((row != MISSING).all()))

    def __iter__(self) -> Iterator[CaseRecord]:
        return (self.record(i) for i in range(len(self)))

    def column(self, var_id: str) -> np.ndarray:
        try:
            return self.codes[:, self._index[var_id]]
        except KeyError:
            raise KeyError(f"dataset has no variable '{var_id}'") from None

    @property
    def is_complete(self) -> bool:
        return bool((self.codes != MISSING).all())

    def take(self, indices: Sequence[int]) -> "Dataset":
        return Dataset(self.variables, self.codes[np.asarray(indices, dtype=np.intp)])

    def concat(self, other: "Dataset") -> "Dataset":
        if self.variables != other.variables:
            raise ValueError("datasets cover different variables")
        return Dataset(self.variables, np.vstack([self.codes, other.codes]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.variables == other.variables and bool(np.array_equal(self.codes, other.codes))

    def __repr__(self) -> str:
        return f"Dataset({len(self)} cases, {len(self.variables)} variables)"
