# Input functions for projection runs: expressions like "2*R(2,1) - z^2*zbar",
# CoeffTable JSON files and the seeded "random:ORDER,DEGREE" catalog entry.

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from .disc_poly import Orders, WeightParam, cpow, eval_jacobi_form
from .spaces import CoeffTable, SampledFunction, random_polyanalytic, synthesize

logger = logging.getLogger(__name__)

RANDOM_PREFIX = "random:"

_FACTOR = re.compile(
    r"""
    R\((?P<rm>\d+),(?P<rn>\d+)\)
    |\(1-\|z\|\^2\)(?:\^(?P<wj>\d+))?
    |zbar(?:\^(?P<zb>\d+))?
    |z(?:\^(?P<za>\d+))?
    |\((?P<cplx>[^()]+)\)
    |(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?j?|j)
    """,
    re.VERBOSE,
)


class ExpressionError(ValueError):
    """The input could not be parsed into a finite disc-polynomial combination."""


@dataclass(frozen=True)
class Factor:
    kind: str  # "R", "z", "zbar" or "weight"
    a: int
    b: int = 0

    @property
    def degrees(self) -> tuple[int, int]:
        if self.kind == "R":
            return self.a, self.b
        if self.kind == "z":
            return self.a, 0
        if self.kind == "zbar":
            return 0, self.a
        return self.a, self.a

    def evaluate(self, g: WeightParam, z: NDArray) -> NDArray:
        if self.kind == "R":
            return np.asarray(eval_jacobi_form(g, Orders(self.a, self.b), z), dtype=complex)
        if self.kind == "z":
            return cpow(z, self.a)
        if self.kind == "zbar":
            return cpow(np.conj(z), self.a)
        return cpow(1 - np.abs(z) ** 2 + 0j, self.a)


@dataclass(frozen=True)
class Term:
    coeff: complex
    factors: tuple[Factor, ...]

    @property
    def degrees(self) -> tuple[int, int]:
        return sum(f.degrees[0] for f in self.factors), sum(f.degrees[1] for f in self.factors)


@dataclass(frozen=True)
class InputFunction:
    """A parsed input: the callable, its z / zbar degree bounds and, when known, its exact coefficients."""
    function: SampledFunction
    z_degree: int
    zbar_degree: int
    table: Optional[CoeffTable] = None


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as e:
        raise ExpressionError(f"Invalid coefficient '{text}'") from e


def _factor(match: re.Match) -> tuple[Optional[Factor], complex]:
    groups = match.groupdict()
    if groups["rm"] is not None:
        return Factor("R", int(groups["rm"]), int(groups["rn"])), 1
    if match.group(0).startswith("(1-|z|^2)"):
        return Factor("weight", int(groups["wj"] or 1)), 1
    if match.group(0).startswith("zbar"):
        return Factor("zbar", int(groups["zb"] or 1)), 1
    if match.group(0).startswith("z"):
        return Factor("z", int(groups["za"] or 1)), 1
    if groups["cplx"] is not None:
        return None, _complex(groups["cplx"])
    return None, _complex(groups["num"])


def parse_terms(text: str) -> list[Term]:
    source = re.sub(r"\s+", "", text)
    if not source:
        raise ExpressionError("Empty expression")

    terms: list[Term] = []
    pos = 0
    while pos < len(source):
        sign = 1
        while pos < len(source) and source[pos] in "+-":
            sign = -sign if source[pos] == "-" else sign
            pos += 1
        coeff: complex = sign
        factors: list[Factor] = []
        while True:
            match = _FACTOR.match(source, pos)
            if match is None:
                raise ExpressionError(f"Unexpected input at position {pos}: '{source[pos:pos + 12]}'")
            factor, scale = _factor(match)
            coeff *= scale
            if factor is not None:
                factors.append(factor)
            pos = match.end()
            if pos < len(source) and source[pos] == "*":
                pos += 1
                continue
            if pos >= len(source) or source[pos] in "+-":
                break
        terms.append(Term(coeff, tuple(factors)))

    return terms


def parse_expression(text: str, g: WeightParam) -> InputFunction:
    terms = parse_terms(text)

    def evaluate(z: NDArray) -> NDArray:
        total = np.zeros(z.shape, dtype=complex)
        for term in terms:
            value = np.full(z.shape, term.coeff, dtype=complex)
            for factor in term.factors:
                value = value * factor.evaluate(g, z)
            total = total + value
        return total

    z_degree = max(t.degrees[0] for t in terms)
    zbar_degree = max(t.degrees[1] for t in terms)
    logger.debug(f"Parsed {len(terms)} terms from '{text}' (bidegree {z_degree},{zbar_degree})")
    return InputFunction(SampledFunction(evaluate, order=zbar_degree, label=text), z_degree, zbar_degree)


def load_input(source: str, g: WeightParam, seed: int) -> InputFunction:
    """Resolve an input specification into an InputFunction."""
    source = source.strip()

    if source.startswith(RANDOM_PREFIX):
        try:
            order, degree = (int(part) for part in source[len(RANDOM_PREFIX):].split(","))
        except ValueError as e:
            raise ExpressionError(f"Catalog entry must read random:ORDER,DEGREE (got '{source}')") from e
        if order < 0 or degree < 0:
            raise ExpressionError(f"Catalog order and degree must be nonnegative (got '{source}')")
        f, table = random_polyanalytic(order, degree, seed, g)
        return InputFunction(f, degree, order, table)

    if source.endswith(".json"):
        path = Path(source)
        try:
            table = CoeffTable.from_payload(json.loads(path.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError, ValueError, TypeError) as e:
            raise ExpressionError(f"Could not read coefficient file {path}: {e}") from e
        return InputFunction(synthesize(table, label=path.name), table.M, table.J, table)

    return parse_expression(source, g)
