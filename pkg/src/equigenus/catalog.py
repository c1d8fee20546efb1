"""Manifold files and the built-in catalog.

File format (JSON, UTF-8)::

    {
      "dimension": 4,
      "fixed_points": [{"sign": 1, "weights": [1, 2]}, ...],
      "name": "cp2_12",
      "pontryagin_numbers": {"[1]": "3"}
    }

Rationals are strings ``"a/b"`` or ``"a"``; floats are rejected.
``pontryagin_numbers`` is optional; when present its keys are partitions
written as non-increasing integer arrays with ``4 * weight == dimension``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb, prod
from pathlib import Path
from typing import Callable, Dict, Sequence, Union

from .exact import format_rational, parse_rational
from .genus import PontryaginData, parse_partition_key, partition_key, partitions_of
from .localization import FixedPoint, S1ManifoldData, point, product_manifold

DATA_DIR = Path(__file__).with_name("data")

_FIELDS = {"name", "dimension", "fixed_points", "pontryagin_numbers"}


class ManifoldFileError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_manifold(obj) -> S1ManifoldData:
    if not isinstance(obj, dict):
        raise ManifoldFileError("<root>", "expected a JSON object")
    unknown = sorted(set(obj) - _FIELDS)
    if unknown:
        raise ManifoldFileError(unknown[0], "unknown field")

    name = obj.get("name")
    if not isinstance(name, str) or not name:
        raise ManifoldFileError("name", "must be a non-empty string")
    dim = obj.get("dimension")
    if not _is_int(dim) or dim < 0 or dim % 2:
        raise ManifoldFileError("dimension", "must be an even non-negative integer")

    raw_fps = obj.get("fixed_points")
    if not isinstance(raw_fps, list) or not raw_fps:
        raise ManifoldFileError("fixed_points", "must be a non-empty list")
    fps = []
    for i, fp in enumerate(raw_fps):
        where = f"fixed_points[{i}]"
        if not isinstance(fp, dict) or set(fp) - {"weights", "sign"}:
            raise ManifoldFileError(where, "expected {weights, sign}")
        w = fp.get("weights")
        if not isinstance(w, list) or not all(_is_int(m) for m in w):
            raise ManifoldFileError(f"{where}.weights", "must be a list of integers")
        if any(m == 0 for m in w):
            raise ManifoldFileError(f"{where}.weights", "zero weight")
        if len(w) != dim // 2:
            raise ManifoldFileError(
                f"{where}.weights", f"weight-list length {len(w)} != dimension/2 = {dim // 2}"
            )
        sign = fp.get("sign", 1)
        if sign not in (1, -1) or not _is_int(sign):
            raise ManifoldFileError(f"{where}.sign", "must be 1 or -1")
        fps.append(FixedPoint(tuple(w), sign))

    pont = None
    if "pontryagin_numbers" in obj:
        raw = obj["pontryagin_numbers"]
        if not isinstance(raw, dict):
            raise ManifoldFileError("pontryagin_numbers", "must be an object")
        numbers: Dict = {}
        for key, val in raw.items():
            where = f"pontryagin_numbers[{key}]"
            try:
                p = parse_partition_key(key)
            except ValueError as e:
                raise ManifoldFileError(where, str(e)) from None
            if 4 * sum(p) != dim:
                raise ManifoldFileError(where, f"4*weight {4 * sum(p)} != dimension {dim}")
            try:
                numbers[p] = parse_rational(val)
            except ValueError:
                raise ManifoldFileError(where, f"malformed rational {val!r}") from None
        pont = PontryaginData(dim, numbers, name)
    return S1ManifoldData(dim, tuple(fps), pont, name)


def parse_manifold_file(text: str) -> S1ManifoldData:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifoldFileError("<root>", f"invalid JSON ({e.msg})") from None
    return parse_manifold(obj)


def manifold_to_obj(M: S1ManifoldData) -> dict:
    obj: dict = {
        "name": M.name,
        "dimension": M.dim,
        "fixed_points": [{"weights": list(fp.weights), "sign": fp.sign} for fp in M.fixed_points],
    }
    if M.pontryagin is not None:
        obj["pontryagin_numbers"] = {
            partition_key(p): format_rational(v) for p, v in sorted(M.pontryagin.numbers.items())
        }
    return obj


def serialize_manifold(M: S1ManifoldData) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(manifold_to_obj(M), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------


def cpn_pontryagin(n: int, name: str = "") -> PontryaginData:
    """``p(CP^n) = (1 + h^2)^(n+1)`` paired with ``h^n``."""
    numbers: Dict = {}
    if n % 2 == 0:
        for I in partitions_of(n // 2):
            numbers[I] = Fraction(prod(comb(n + 1, i) for i in I))
    return PontryaginData(2 * n, numbers, name)


def catalog_cpn(a: Sequence[int], name: str = "") -> S1ManifoldData:
    """``CP^n`` with the linear action of parameters ``a``: the fixed point
    ``P_i`` has weights ``a_j - a_i`` for ``j != i``."""
    a = [int(x) for x in a]
    if len(a) < 1:
        raise ValueError("need at least one parameter")
    if len(set(a)) != len(a):
        raise ValueError("repeated parameters: fixed points would not be isolated")
    n = len(a) - 1
    fps = tuple(
        FixedPoint(tuple(a[j] - a[i] for j in range(n + 1) if j != i)) for i in range(n + 1)
    )
    return S1ManifoldData(2 * n, fps, cpn_pontryagin(n, name), name)


def reverse_orientation(M: S1ManifoldData, name: str = "") -> S1ManifoldData:
    fps = tuple(FixedPoint(fp.weights, -fp.sign) for fp in M.fixed_points)
    pont = None
    if M.pontryagin is not None:
        pont = PontryaginData(M.dim, {p: -v for p, v in M.pontryagin.numbers.items()}, name)
    return S1ManifoldData(M.dim, fps, pont, name)


def _renamed(M: S1ManifoldData, name: str) -> S1ManifoldData:
    pont = None if M.pontryagin is None else PontryaginData(M.dim, M.pontryagin.numbers, name)
    return S1ManifoldData(M.dim, M.fixed_points, pont, name)


def _s2() -> S1ManifoldData:
    return catalog_cpn((0, 1), "s2")


CATALOG: Dict[str, Callable[[], S1ManifoldData]] = {
    "point": point,
    "s2": _s2,
    "cp2_12": lambda: catalog_cpn((0, 1, 2), "cp2_12"),
    "cp2_24": lambda: catalog_cpn((0, 2, 4), "cp2_24"),
    "cp2bar_12": lambda: reverse_orientation(catalog_cpn((0, 1, 2)), "cp2bar_12"),
    "cp3": lambda: catalog_cpn((0, 1, 2, 3), "cp3"),
    "cp4": lambda: catalog_cpn((0, 1, 2, 3, 4), "cp4"),
    "s2xs2": lambda: _renamed(product_manifold(_s2(), _s2()), "s2xs2"),
    "cp2xs2": lambda: _renamed(product_manifold(catalog_cpn((0, 1, 2)), _s2()), "cp2xs2"),
}


def catalog() -> Dict[str, S1ManifoldData]:
    return {name: make() for name, make in CATALOG.items()}


def load_manifold(ref: Union[str, Path]) -> S1ManifoldData:
    """Load from a path, falling back to the shipped catalog files by name."""
    path = Path(ref)
    if not path.exists():
        stem = path.name[:-5] if path.name.endswith(".json") else path.name
        path = DATA_DIR / f"{stem}.json"
        if not path.exists():
            raise FileNotFoundError(f"no manifold file or catalog entry named {str(ref)!r}")
    return parse_manifold_file(path.read_text(encoding="utf-8"))


def write_catalog(directory: Path = DATA_DIR) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    for name, M in catalog().items():
        (directory / f"{name}.json").write_text(serialize_manifold(M), encoding="utf-8")


if __name__ == "__main__":
    write_catalog()
