"""Markov-Rényi interval maps: branch data, builtin families, exact evaluation and finite-scale hypothesis checks."""

import bisect
import dataclasses
import functools
import math
import pathlib
from fractions import Fraction
from typing import Literal

import yaml
from pydantic import Field, validate_call

from ._error_collection import _collect_error
from ._exceptions import ExceptionalSetError, HypothesisViolationError, MapSpecificationError
from ._globals import (
    _BLOCKING_HYPOTHESES,
    _BUILTIN_MAP_NAMES,
    _DEFAULT_BRANCH_HORIZON,
    _DEFAULT_SAMPLES_PER_BRANCH,
    _HYPOTHESIS_NAMES,
)
from ._rationals import as_fraction, format_fraction, is_integral, log_fraction, log_positive

_MIDDLE_THIRD_TERNARY_CAP = 4096


@dataclasses.dataclass(frozen=True)
class BranchSpec:
    """
    One full branch x ↦ (ax + b) / (cx + d) of a Markov-Rényi map, defined on the open interval (lo, hi).

    Affine branches are stored as the Möbius coefficients (slope, intercept, 0, 1) scaled to coprime integers.
    """

    index: int
    lo: Fraction
    hi: Fraction
    coefficients: tuple[int, int, int, int]
    form: Literal["mobius", "affine"] = "mobius"

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)

    @property
    def determinant(self) -> int:
        a, b, c, d = self.coefficients
        return a * d - b * c

    @property
    def orientation(self) -> Literal["increasing", "decreasing"]:
        return "increasing" if self.determinant > 0 else "decreasing"

    @property
    def inverse_coefficients(self) -> tuple[int, int, int, int]:
        a, b, c, d = self.coefficients
        return (d, -b, -c, a)

    def contains(self, x: Fraction) -> bool:
        return self.lo < x < self.hi

    def apply(self, x: Fraction) -> Fraction:
        a, b, c, d = self.coefficients
        return Fraction(a * x + b) / (c * x + d)

    def derivative(self, x: Fraction) -> Fraction:
        """Exact |T'(x)| = |ad - bc| / (cx + d)^2, also valid at the closed endpoints."""
        _, _, c, d = self.coefficients
        return Fraction(abs(self.determinant)) / (c * x + d) ** 2


@dataclasses.dataclass(frozen=True)
class MapSpec:
    """
    An immutable Markov-Rényi map.

    Builtin maps carry a closed-form `family` and generate branches lazily beyond the materialized `branches`;
    user maps are exactly the listed branches.
    """

    name: str
    gamma: Fraction | float
    distortion_constant: Fraction | float
    branches: tuple[BranchSpec, ...]
    family: Literal["gauss", "renyi", "middle_third_gaps"] | None = None
    parabolic_point: Fraction | None = None
    expansion_iterate: int = 1
    ordering: Literal["left_to_right", "right_to_left", "unordered"] = "left_to_right"

    @property
    def number_of_branches(self) -> int | None:
        """The number of branches, or None for an infinite builtin family."""
        return None if self.family is not None else len(self.branches)

    @property
    def has_exact_derivative_bounds(self) -> bool:
        """Whether n^gamma and C are rational, so that derivative and diameter bounds compare exactly."""
        return is_integral(self.gamma) and not isinstance(self.distortion_constant, float)

    def branch(self, n: int) -> BranchSpec:
        if n < 1:
            message = f"Branch indices are positive integers; received {n}."
            raise ValueError(message)

        match self.family:
            case "gauss":
                return _gauss_branch(n)
            case "renyi":
                return _renyi_branch(n)
            case "middle_third_gaps":
                return _middle_third_gap_branch(n)

        if n > len(self.branches):
            message = f"Map '{self.name}' has {len(self.branches)} branches; digit {n} is beyond the branch family."
            raise MapSpecificationError(message)
        return self.branches[n - 1]

    def locate(self, x: Fraction) -> int:
        """
        Return the index of the branch whose open interval contains x.

        Raises ExceptionalSetError when x is a branch endpoint or lies outside every branch interval.
        """
        match self.family:
            case "gauss":
                return _locate_gauss(x)
            case "renyi":
                return _locate_renyi(x)
            case "middle_third_gaps":
                return _locate_middle_third_gap(x)

        lower_endpoints, ordered_branches = self._sorted_branch_table
        position = bisect.bisect_right(lower_endpoints, x) - 1
        if position >= 0 and ordered_branches[position].contains(x):
            return ordered_branches[position].index

        endpoints = {endpoint for branch in ordered_branches for endpoint in branch.interval}
        if x in endpoints:
            message = f"Point {format_fraction(x)} lies in exceptional set 𝒬: it is a branch interval endpoint."
        else:
            message = f"Point {format_fraction(x)} lies in exceptional set 𝒬: it lies outside every branch interval."
        raise ExceptionalSetError(message)

    @functools.cached_property
    def _sorted_branch_table(self) -> tuple[list[Fraction], list[BranchSpec]]:
        ordered_branches = sorted(self.branches, key=lambda branch: branch.lo)
        return [branch.lo for branch in ordered_branches], ordered_branches


@functools.lru_cache(maxsize=8192)
def _gauss_branch(n: int) -> BranchSpec:
    return BranchSpec(index=n, lo=Fraction(1, n + 1), hi=Fraction(1, n), coefficients=(-n, 1, 1, 0))


@functools.lru_cache(maxsize=8192)
def _renyi_branch(n: int) -> BranchSpec:
    return BranchSpec(index=n, lo=Fraction(n - 1, n), hi=Fraction(n, n + 1), coefficients=(n, 1 - n, -1, 1))


@functools.lru_cache(maxsize=8192)
def _middle_third_gap_branch(n: int) -> BranchSpec:
    level = n.bit_length()
    position = n - 2 ** (level - 1)

    # Binary digits of the position become the ternary digits {0, 2} of the gap's left neighbour
    ternary_prefix = 0
    for bit in format(position, f"0{level - 1}b") if level > 1 else "":
        ternary_prefix = 3 * ternary_prefix + 2 * int(bit)

    scale = 3**level
    return BranchSpec(
        index=n,
        lo=Fraction(3 * ternary_prefix + 1, scale),
        hi=Fraction(3 * ternary_prefix + 2, scale),
        coefficients=(scale, -(3 * ternary_prefix + 1), 0, 1),
        form="affine",
    )


def _boundary_error(x: Fraction) -> ExceptionalSetError:
    message = f"Point {format_fraction(x)} lies in exceptional set 𝒬: it is an endpoint of a branch interval."
    return ExceptionalSetError(message)


def _outside_error(x: Fraction) -> ExceptionalSetError:
    message = f"Point {format_fraction(x)} lies in exceptional set 𝒬: it lies outside every branch interval."
    return ExceptionalSetError(message)


def _locate_gauss(x: Fraction) -> int:
    if not 0 < x <= 1:
        raise _outside_error(x)

    reciprocal = 1 / Fraction(x)
    n = math.floor(reciprocal)
    if reciprocal == n:
        raise _boundary_error(x)
    return n


def _locate_renyi(x: Fraction) -> int:
    if not 0 <= x < 1:
        raise _outside_error(x)

    reciprocal = 1 / (1 - Fraction(x))
    n = math.floor(reciprocal)
    if reciprocal == n:
        raise _boundary_error(x)
    return n


def _locate_middle_third_gap(x: Fraction) -> int:
    if not 0 < x < 1:
        raise _outside_error(x)

    remainder = Fraction(x)
    position = 0
    for level in range(1, _MIDDLE_THIRD_TERNARY_CAP + 1):
        tripled = 3 * remainder
        digit = math.floor(tripled)
        remainder = tripled - digit
        if digit == 1:
            if remainder == 0:
                raise _boundary_error(x)
            return 2 ** (level - 1) + position
        if remainder == 0:
            # A terminating expansion ending in 2 is the right endpoint of a gap
            raise _boundary_error(x)
        position = 2 * position + digit // 2

    message = (
        f"Point {format_fraction(x)} was not located in a middle-third gap within {_MIDDLE_THIRD_TERNARY_CAP} ternary "
        "digits; it lies in exceptional set 𝒬 (the Cantor set) or beyond the search depth."
    )
    raise ExceptionalSetError(message)


def _builtin_map(name: str, branch_horizon: int) -> MapSpec:
    match name:
        case "gauss":
            return MapSpec(
                name="gauss",
                gamma=Fraction(2),
                distortion_constant=Fraction(4),
                branches=tuple(_gauss_branch(n) for n in range(1, branch_horizon + 1)),
                family="gauss",
                expansion_iterate=2,
                ordering="right_to_left",
            )
        case "renyi":
            return MapSpec(
                name="renyi",
                gamma=Fraction(2),
                distortion_constant=Fraction(4),
                branches=tuple(_renyi_branch(n) for n in range(1, branch_horizon + 1)),
                family="renyi",
                parabolic_point=Fraction(0),
                expansion_iterate=1,
                ordering="left_to_right",
            )
        case "middle_third_gaps":
            return MapSpec(
                name="middle_third_gaps",
                gamma=math.log(3) / math.log(2),
                distortion_constant=Fraction(4),
                branches=tuple(_middle_third_gap_branch(n) for n in range(1, branch_horizon + 1)),
                family="middle_third_gaps",
                expansion_iterate=1,
                ordering="unordered",
            )

    message = f"Unknown builtin map '{name}'; choose one of {_BUILTIN_MAP_NAMES}."
    raise MapSpecificationError(message)


@validate_call
def load_map(
    source: str | pathlib.Path | dict,
    *,
    branch_horizon: int = Field(ge=1, default=_DEFAULT_BRANCH_HORIZON),
) -> MapSpec:
    """
    Load a Markov-Rényi map from a builtin name, a JSON/YAML map-spec file, or an already parsed document.

    Parameters
    ----------
    source : string, pathlib.Path, or dict
        One of the builtin names ("gauss", "renyi", "middle_third_gaps"), the path to a map-spec document, or the
        parsed document itself. Documents are either {"builtin": name} or
        {"gamma": ..., "C": ..., "branches": [{"interval": ["p/q", "r/s"], "mobius": [a, b, c, d]}, ...]}.
        Affine branches use {"interval": [...], "affine": {"slope": "p/q", "intercept": "r/s"}}.
    branch_horizon : int, default: 64
        The number of branches of a builtin family to materialize; later branches are generated on demand.

    Returns
    -------
    MapSpec
        The loaded map with exact rational endpoints.
    """
    if isinstance(source, str) and source.strip().lower() in _BUILTIN_MAP_NAMES:
        return _builtin_map(name=source.strip().lower(), branch_horizon=branch_horizon)

    if isinstance(source, (str, pathlib.Path)):
        map_spec_file_path = pathlib.Path(source)
        if not map_spec_file_path.is_file():
            message = (
                f"'{source}' is neither a builtin map {_BUILTIN_MAP_NAMES} nor an existing map-spec file."
            )
            raise MapSpecificationError(message)

        with open(file=map_spec_file_path) as io:
            try:
                document = yaml.safe_load(stream=io)
            except yaml.YAMLError as exception:
                message = f"Map-spec file '{map_spec_file_path}' could not be parsed: {exception}"
                raise MapSpecificationError(message) from exception
    else:
        document = source

    return _map_from_document(document=document, branch_horizon=branch_horizon)


def _parse_real(value: object, field_name: str) -> Fraction | float:
    if isinstance(value, bool) or value is None:
        message = f"Map-spec field '{field_name}' must be a number; received {value!r}."
        raise MapSpecificationError(message)
    if isinstance(value, float):
        return value
    try:
        return as_fraction(value)
    except (TypeError, ValueError) as exception:
        message = f"Map-spec field '{field_name}' must be a number or a 'p/q' string; received {value!r}."
        raise MapSpecificationError(message) from exception


def _integer_coefficients(values: tuple[Fraction, Fraction, Fraction, Fraction]) -> tuple[int, int, int, int]:
    common_denominator = math.lcm(*(value.denominator for value in values))
    integers = [int(value * common_denominator) for value in values]
    common_divisor = math.gcd(*integers) or 1
    return tuple(integer // common_divisor for integer in integers)


def _parse_branch(raw_branch: object, position: int) -> tuple[Fraction, Fraction, tuple[int, int, int, int], str]:
    if not isinstance(raw_branch, dict) or "interval" not in raw_branch:
        message = f"Branch entry {position} must be a mapping with an 'interval' field; received {raw_branch!r}."
        raise MapSpecificationError(message)

    raw_interval = raw_branch["interval"]
    if not isinstance(raw_interval, (list, tuple)) or len(raw_interval) != 2:
        message = f"Branch entry {position} must give its interval as a pair of endpoints; received {raw_interval!r}."
        raise MapSpecificationError(message)
    lo, hi = (_parse_real(value=endpoint, field_name=f"branches[{position}].interval") for endpoint in raw_interval)
    if isinstance(lo, float) or isinstance(hi, float):
        message = f"Branch entry {position} must use exact rational endpoints (integers or 'p/q' strings)."
        raise MapSpecificationError(message)
    if not 0 <= lo < hi <= 1:
        message = (
            f"Branch entry {position} has interval ({format_fraction(lo)}, {format_fraction(hi)}), "
            "which is not a nonempty subinterval of [0, 1]."
        )
        raise MapSpecificationError(message)

    has_mobius = "mobius" in raw_branch
    has_affine = "affine" in raw_branch
    if has_mobius == has_affine:
        message = f"Branch entry {position} must specify exactly one of 'mobius' or 'affine'."
        raise MapSpecificationError(message)

    if has_mobius:
        raw_coefficients = raw_branch["mobius"]
        if not isinstance(raw_coefficients, (list, tuple)) or len(raw_coefficients) != 4:
            message = f"Branch entry {position} must list four Möbius coefficients [a, b, c, d]."
            raise MapSpecificationError(message)
        parsed = tuple(
            _parse_real(value=value, field_name=f"branches[{position}].mobius") for value in raw_coefficients
        )
        form = "mobius"
    else:
        raw_affine = raw_branch["affine"]
        if not isinstance(raw_affine, dict) or {"slope", "intercept"} - set(raw_affine):
            message = f"Branch entry {position} must give its affine form as {{'slope': ..., 'intercept': ...}}."
            raise MapSpecificationError(message)
        slope = _parse_real(value=raw_affine["slope"], field_name=f"branches[{position}].affine.slope")
        intercept = _parse_real(value=raw_affine["intercept"], field_name=f"branches[{position}].affine.intercept")
        parsed = (slope, intercept, Fraction(0), Fraction(1))
        form = "affine"

    if any(isinstance(value, float) for value in parsed):
        message = f"Branch entry {position} must use exact rational coefficients."
        raise MapSpecificationError(message)

    coefficients = _integer_coefficients(values=parsed)
    a, b, c, d = coefficients
    if a * d - b * c == 0:
        message = f"Branch entry {position} is degenerate: its Möbius determinant ad - bc vanishes."
        raise MapSpecificationError(message)

    left_denominator = c * lo + d
    right_denominator = c * hi + d
    if left_denominator == 0 or right_denominator == 0 or (left_denominator > 0) != (right_denominator > 0):
        message = f"Branch entry {position} has a pole on its closed interval."
        raise MapSpecificationError(message)

    return lo, hi, coefficients, form


def _map_from_document(document: object, branch_horizon: int) -> MapSpec:
    if not isinstance(document, dict):
        message = f"A map-spec document must be a mapping; received {type(document).__name__}."
        raise MapSpecificationError(message)

    if "builtin" in document:
        return _builtin_map(name=str(document["builtin"]).strip().lower(), branch_horizon=branch_horizon)

    missing_fields = {"gamma", "C", "branches"} - set(document)
    if missing_fields:
        message = f"Map-spec document is missing the fields {sorted(missing_fields)}."
        raise MapSpecificationError(message)

    gamma = _parse_real(value=document["gamma"], field_name="gamma")
    distortion_constant = _parse_real(value=document["C"], field_name="C")
    if gamma <= 1:
        message = f"The derivative exponent gamma must exceed 1; received {gamma}."
        raise MapSpecificationError(message)
    if distortion_constant <= 1:
        message = f"The distortion constant C must exceed 1; received {distortion_constant}."
        raise MapSpecificationError(message)

    raw_branches = document["branches"]
    if not isinstance(raw_branches, list) or len(raw_branches) == 0:
        message = "Map-spec field 'branches' must be a nonempty list."
        raise MapSpecificationError(message)
    if len(raw_branches) == 1:
        message = (
            "A single full branch maps its interval onto [0, 1] with average slope one, so no gamma > 1 can "
            "satisfy the derivative bounds; at least two branches are required."
        )
        raise MapSpecificationError(message)

    parsed_branches = [_parse_branch(raw_branch=raw, position=position) for position, raw in enumerate(raw_branches)]

    spatially_sorted = sorted(parsed_branches, key=lambda parsed: parsed[0])
    for left, right in zip(spatially_sorted, spatially_sorted[1:]):
        if left[1] > right[0]:
            message = (
                f"Branch intervals ({format_fraction(left[0])}, {format_fraction(left[1])}) and "
                f"({format_fraction(right[0])}, {format_fraction(right[1])}) overlap."
            )
            raise MapSpecificationError(message)

    # Index n must carry the n^gamma scale, so a list whose derivative scale falls along it is reversed
    midpoint_scales = [
        BranchSpec(index=1, lo=lo, hi=hi, coefficients=coefficients).derivative(x=(lo + hi) / 2)
        for lo, hi, coefficients, _ in parsed_branches
    ]
    if all(left >= right for left, right in zip(midpoint_scales, midpoint_scales[1:])) and (
        midpoint_scales[0] > midpoint_scales[-1]
    ):
        parsed_branches.reverse()

    lower_endpoints = [parsed[0] for parsed in parsed_branches]
    if lower_endpoints == sorted(lower_endpoints):
        ordering = "left_to_right"
    elif lower_endpoints == sorted(lower_endpoints, reverse=True):
        ordering = "right_to_left"
    else:
        ordering = "unordered"

    branches = tuple(
        BranchSpec(index=index, lo=lo, hi=hi, coefficients=coefficients, form=form)
        for index, (lo, hi, coefficients, form) in enumerate(parsed_branches, start=1)
    )

    parabolic_point = document.get("parabolic_point")
    if parabolic_point is not None:
        parabolic_point = _parse_real(value=parabolic_point, field_name="parabolic_point")
        if isinstance(parabolic_point, float) or not 0 <= parabolic_point <= 1:
            message = "Map-spec field 'parabolic_point' must be an exact rational in [0, 1]."
            raise MapSpecificationError(message)

    expansion_iterate = document.get("expansion_iterate", 1)
    if isinstance(expansion_iterate, bool) or not isinstance(expansion_iterate, int) or expansion_iterate < 1:
        message = f"Map-spec field 'expansion_iterate' must be a positive integer; received {expansion_iterate!r}."
        raise MapSpecificationError(message)

    return MapSpec(
        name=str(document.get("name", "custom")),
        gamma=gamma,
        distortion_constant=distortion_constant,
        branches=branches,
        family=None,
        parabolic_point=parabolic_point,
        expansion_iterate=expansion_iterate,
        ordering=ordering,
    )


def evaluate(map_spec: MapSpec, x: Fraction | int | str) -> tuple[Fraction, int]:
    """
    Apply the map exactly.

    Parameters
    ----------
    map_spec : MapSpec
        The map to evaluate.
    x : Fraction, int, or 'p/q' string
        A point in the interior of some branch interval.

    Returns
    -------
    value : Fraction
        The exact image T(x).
    branch : int
        The index n of the branch interval containing x.
    """
    x = as_fraction(x)
    n = map_spec.locate(x)

    return map_spec.branch(n).apply(x), n


def derivative(map_spec: MapSpec, x: Fraction | int | str) -> Fraction:
    """Exact |T'(x)| on the branch containing x; boundary points raise ExceptionalSetError."""
    x = as_fraction(x)
    n = map_spec.locate(x)

    return map_spec.branch(n).derivative(x)


def derivative_within_bounds(
    derivative_value: Fraction, n: int, gamma: Fraction | float, distortion_constant: Fraction | float
) -> bool:
    """Check C^-1 n^gamma <= |T'| <= C n^gamma, exactly when gamma is an integer and C rational."""
    if is_integral(gamma) and not isinstance(distortion_constant, float):
        scale = Fraction(n) ** int(gamma)
        return scale / distortion_constant <= derivative_value <= distortion_constant * scale

    log_derivative = log_fraction(derivative_value)
    log_scale = float(gamma) * math.log(n)
    log_distortion = log_positive(distortion_constant)
    slack = 1e-12 * max(1.0, abs(log_scale))
    return log_scale - log_distortion - slack <= log_derivative <= log_scale + log_distortion + slack


@dataclasses.dataclass(frozen=True)
class HypothesisCheck:
    hypothesis: int
    status: Literal["pass", "fail", "unverifiable-at-finite-scale"]
    witnesses: tuple[str, ...] = ()
    detail: str = ""

    @property
    def description(self) -> str:
        return _HYPOTHESIS_NAMES[self.hypothesis]


@dataclasses.dataclass(frozen=True)
class HypothesisReport:
    """Per-hypothesis status of a map at finite scale; failures carry witness descriptions."""

    map_name: str
    checks: tuple[HypothesisCheck, ...]
    parabolic: bool
    samples_per_branch: int
    branch_horizon: int

    @property
    def all_pass(self) -> bool:
        return all(check.status == "pass" for check in self.checks)

    @property
    def blocking_failures(self) -> tuple[HypothesisCheck, ...]:
        return tuple(
            check for check in self.checks if check.hypothesis in _BLOCKING_HYPOTHESES and check.status == "fail"
        )

    def status(self, hypothesis: int) -> str:
        return next(check.status for check in self.checks if check.hypothesis == hypothesis)

    def require_valid(self, *, allow_violations: bool = False) -> None:
        """
        Raise HypothesisViolationError when a blocking hypothesis fails.

        With `allow_violations`, the failure is recorded in the error collection folder instead.
        """
        if len(self.blocking_failures) == 0:
            return None

        failure_summary = "; ".join(
            f"hypothesis ({check.hypothesis}) {check.description}: {', '.join(check.witnesses[:3])}"
            for check in self.blocking_failures
        )
        message = f"Map '{self.map_name}' fails at finite scale - {failure_summary}."
        if allow_violations:
            _collect_error(message=message, error_type="hypothesis")
            return None

        raise HypothesisViolationError(message)

    def to_dict(self) -> dict:
        return {
            "map": self.map_name,
            "parabolic": self.parabolic,
            "samples_per_branch": self.samples_per_branch,
            "branch_horizon": self.branch_horizon,
            "all_pass": self.all_pass,
            "hypotheses": {
                str(check.hypothesis): {
                    "description": check.description,
                    "status": check.status,
                    "witnesses": list(check.witnesses),
                    "detail": check.detail,
                }
                for check in self.checks
            },
        }


def _sample_points(branch: BranchSpec, samples_per_branch: int) -> list[Fraction]:
    width = branch.hi - branch.lo
    return [branch.lo + width * Fraction(step, samples_per_branch - 1) for step in range(samples_per_branch)]


def _check_shared_endpoints(branches: list[BranchSpec]) -> HypothesisCheck:
    witnesses = []
    for left, right in zip(branches, branches[1:]):
        shared_endpoints = set(left.interval) & set(right.interval)
        if len(shared_endpoints) != 1:
            witnesses.append(
                f"branches {left.index} and {right.index}: ({format_fraction(left.lo)}, {format_fraction(left.hi)}) "
                f"and ({format_fraction(right.lo)}, {format_fraction(right.hi)}) "
                f"share {len(shared_endpoints)} endpoints"
            )

    status = "fail" if witnesses else "pass"
    return HypothesisCheck(hypothesis=1, status=status, witnesses=tuple(witnesses))


def _check_full_images(branches: list[BranchSpec]) -> HypothesisCheck:
    witnesses = []
    for branch in branches:
        images = {branch.apply(branch.lo), branch.apply(branch.hi)}
        if images != {Fraction(0), Fraction(1)}:
            image_text = ", ".join(format_fraction(image) for image in sorted(images))
            witnesses.append(f"branch {branch.index}: endpoint images {{{image_text}}}")

    status = "fail" if witnesses else "pass"
    return HypothesisCheck(hypothesis=4, status=status, witnesses=tuple(witnesses))


def _check_derivative_bounds(map_spec: MapSpec, branches: list[BranchSpec], samples_per_branch: int) -> HypothesisCheck:
    witnesses = []
    for branch in branches:
        for x in _sample_points(branch=branch, samples_per_branch=samples_per_branch):
            derivative_value = branch.derivative(x)
            if not derivative_within_bounds(
                derivative_value=derivative_value,
                n=branch.index,
                gamma=map_spec.gamma,
                distortion_constant=map_spec.distortion_constant,
            ):
                witnesses.append(
                    f"branch {branch.index} at x={format_fraction(x)}: |T'|={format_fraction(derivative_value)}"
                )

    status = "fail" if witnesses else "pass"
    detail = f"C={map_spec.distortion_constant}, gamma={map_spec.gamma}; sampled closed branch intervals"
    return HypothesisCheck(hypothesis=5, status=status, witnesses=tuple(witnesses), detail=detail)


def _check_smoothness(map_spec: MapSpec, branches: list[BranchSpec], samples_per_branch: int) -> HypothesisCheck:
    if map_spec.family is not None:
        return HypothesisCheck(
            hypothesis=2, status="pass", detail="checked structurally: Möbius/affine branches without poles"
        )

    witnesses = []
    for branch in branches:
        for x in _sample_points(branch=branch, samples_per_branch=samples_per_branch):
            _, _, c, d = branch.coefficients
            if c * x + d == 0:
                witnesses.append(f"branch {branch.index} has a pole at x={format_fraction(x)}")

    status = "fail" if witnesses else "pass"
    return HypothesisCheck(hypothesis=2, status=status, witnesses=tuple(witnesses), detail="sampled")


def _check_expansion(map_spec: MapSpec, branches: list[BranchSpec], samples_per_branch: int) -> HypothesisCheck:
    if map_spec.family == "gauss":
        return HypothesisCheck(hypothesis=3, status="pass", detail="checked structurally: |(G^2)'| > 1 off 𝒬")
    if map_spec.family == "renyi":
        return HypothesisCheck(
            hypothesis=3, status="pass", detail="checked structurally: |R'(x)| = 1/(1-x)^2 > 1 for x != 0 (parabolic)"
        )
    if map_spec.family == "middle_third_gaps":
        return HypothesisCheck(hypothesis=3, status="pass", detail="checked structurally: slopes are powers of 3")

    witnesses = []
    parabolic_point = map_spec.parabolic_point
    if parabolic_point is not None:
        containing_branches = [branch for branch in branches if branch.lo <= parabolic_point <= branch.hi]
        if not any(
            branch.apply(parabolic_point) == parabolic_point and branch.derivative(parabolic_point) >= 1
            for branch in containing_branches
        ):
            witnesses.append(f"declared parabolic point {format_fraction(parabolic_point)} is not a fixed point")

    number_of_completed_samples = 0
    for branch in branches:
        interior_samples = _sample_points(branch=branch, samples_per_branch=samples_per_branch)[1:-1]
        for x in interior_samples:
            if x == parabolic_point:
                continue

            product = Fraction(1)
            point = x
            try:
                for _ in range(map_spec.expansion_iterate):
                    current_branch = map_spec.branch(map_spec.locate(point))
                    product *= current_branch.derivative(point)
                    point = current_branch.apply(point)
            except (ExceptionalSetError, ValueError):
                continue

            number_of_completed_samples += 1
            if product <= 1:
                witnesses.append(
                    f"|(T^{map_spec.expansion_iterate})'({format_fraction(x)})| = {format_fraction(product)} <= 1"
                )

    if witnesses:
        return HypothesisCheck(hypothesis=3, status="fail", witnesses=tuple(witnesses), detail="sampled")
    if number_of_completed_samples == 0:
        return HypothesisCheck(
            hypothesis=3,
            status="unverifiable-at-finite-scale",
            detail="no sampled orbit stayed inside the branch intervals",
        )
    return HypothesisCheck(
        hypothesis=3, status="pass", detail=f"sampled with m={map_spec.expansion_iterate}"
    )


def validate_hypotheses(
    map_spec: MapSpec,
    *,
    samples_per_branch: int = _DEFAULT_SAMPLES_PER_BRANCH,
    branch_horizon: int = _DEFAULT_BRANCH_HORIZON,
) -> HypothesisReport:
    """
    Check the five standing hypotheses of a Markov-Rényi map at finite scale.

    Failures are reported with witnesses, never raised; call `HypothesisReport.require_valid` to enforce them.

    Parameters
    ----------
    map_spec : MapSpec
        The map to check.
    samples_per_branch : int, default: 16
        The number of evenly spaced points (endpoints included) sampled in each closed branch interval.
    branch_horizon : int, default: 64
        The number of branches to check; a finite user map is checked in full when it has fewer branches.
    """
    if samples_per_branch < 2 or branch_horizon < 1:
        message = (
            "Hypothesis checks need at least two samples per branch and one branch; "
            f"received samples_per_branch={samples_per_branch}, branch_horizon={branch_horizon}."
        )
        raise ValueError(message)

    number_of_branches = map_spec.number_of_branches
    checked_horizon = branch_horizon if number_of_branches is None else min(branch_horizon, number_of_branches)
    branches = [map_spec.branch(n) for n in range(1, checked_horizon + 1)]

    checks = (
        _check_shared_endpoints(branches=branches),
        _check_smoothness(map_spec=map_spec, branches=branches, samples_per_branch=samples_per_branch),
        _check_expansion(map_spec=map_spec, branches=branches, samples_per_branch=samples_per_branch),
        _check_full_images(branches=branches),
        _check_derivative_bounds(map_spec=map_spec, branches=branches, samples_per_branch=samples_per_branch),
    )

    return HypothesisReport(
        map_name=map_spec.name,
        checks=checks,
        parabolic=map_spec.parabolic_point is not None,
        samples_per_branch=samples_per_branch,
        branch_horizon=checked_horizon,
    )
