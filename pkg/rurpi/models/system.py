from __future__ import annotations

from dataclasses import dataclass

from ..algebra.polyarith import IntPoly


@dataclass(frozen=True, slots=True)
class PolySystem:
    """Input system; generators are denominator-cleared, in declaration order."""

    variables: tuple[str, ...]
    generators: tuple[IntPoly, ...]
    source: str | None = None

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def max_degree(self) -> int:
        return max((g.total_degree for g in self.generators), default=0)

    def same_equations(self, other: PolySystem) -> bool:
        return self.variables == other.variables and self.generators == other.generators
