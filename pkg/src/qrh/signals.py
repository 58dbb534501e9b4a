"""Structured pole/zero signals and domain errors shared across the package.

Evaluation near a known pole or zero lattice raises :class:`PoleSignal`
carrying the lattice location instead of returning an infinity or NaN.
Callers that sample identities catch the signal and exclude the point;
the CLI maps it to a dedicated exit code.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class PoleSignal(ArithmeticError):
    """Evaluation hit a pole or zero of a special function.

    Attributes
    ----------
    kind:     "pole" or "zero".
    location: the offending lattice point (e.g. the non-positive integer n
              with (w+eta)/omega == n), in the coordinates documented by
              the raising function.
    source:   name of the function that raised.
    """

    kind: str
    location: complex
    source: str

    def __str__(self) -> str:
        return f"{self.source}: {self.kind} at lattice point {self.location}"


class DomainError(ValueError):
    """Argument lies outside the documented domain of the operation."""


class UnsupportedRegimeError(DomainError):
    """Parameter regime is valid mathematics but outside this implementation."""


#: Half-width of the window around a pole/zero lattice point that triggers
#: a signal.  Relative to the lattice coordinate.
POLE_TOL = 1e-12


def near_nonpositive_integer(v: complex, tol: float = POLE_TOL) -> int | None:
    """Return n <= 0 with |v - n| below tol (scaled by max(1,|v|)), else None."""
    m = round(v.real)
    if m <= 0 and abs(v - m) <= tol * max(1.0, abs(v)):
        return int(m)
    return None
