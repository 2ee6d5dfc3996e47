"""Call the fast Lyapunov spectra tools from the command line."""

import itertools
import json
import math
import sys
from collections.abc import Sequence
from fractions import Fraction

import click
import mpmath
import numpy as np
import pandas as pd

from ._coding import DigitWord, compute_cylinders, decode, encode, random_repeller_points
from ._digit_constructions import d_set_digits, e_set_digits, luczak_witnesses
from ._digit_word_io import read_digit_words
from ._dimension import (
    count_product_tuples,
    cover_upper,
    e_set_dimension_formula,
    enumerate_basic_intervals,
    falconer_lower,
)
from ._exceptions import MarkovRenyiError
from ._exponents import chain_rule_violations, digit_statistics, fast_exponent_partials, trace, trace_from_orbit
from ._fsw import fsw_sequence
from ._gpsi import gpsi_appendix, gpsi_simple
from ._maps import load_map, validate_hypotheses
from ._rationals import format_fraction
from ._run_config import RunConfig
from ._scaling import invariants, is_equivalent_increasing, load_scaling_function
from ._sequences import SequencePair, load_sequence_generator
from ._spectra import SpectrumQuery, evaluate_spectrum, is_continuous_at_infinity

_ALPHA_CLASSES = {"0": "zero", "finite": "finite", "inf": "infinite"}

_map_option = click.option(
    "--map",
    "map_source",
    help="A builtin map name (gauss, renyi, middle_third_gaps) or the path to a JSON/YAML map-spec document.",
    required=False,
    type=str,
    default="gauss",
)
_output_format_option = click.option(
    "--output_format",
    help="Print a JSON object, or print the CSV table to stdout and the JSON summary to stderr.",
    required=False,
    type=click.Choice(["json", "csv"]),
    default="json",
)
_csv_file_path_option = click.option(
    "--csv_file_path",
    help="Also write the per-row table to this CSV file.",
    required=False,
    type=click.Path(writable=True),
    default=None,
)
_maximum_number_of_workers_option = click.option(
    "--maximum_number_of_workers",
    help="The maximum number of workers to distribute tasks across.",
    required=False,
    type=click.IntRange(min=1),
    default=1,
)


def _to_jsonable(value: object) -> object:
    if isinstance(value, dict):
        return {str(key): _to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_to_jsonable(item) for item in value.tolist()]
    if isinstance(value, DigitWord):
        return value.to_line()
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating, mpmath.mpf)):
        number = float(value)
        if math.isnan(number):
            return None
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return number
    return value


def _emit(
    *,
    config: RunConfig,
    payload: dict,
    frame: pd.DataFrame | None = None,
    csv_file_path: str | None = None,
) -> None:
    """Print data to stdout; with the csv format the table goes to stdout and the JSON summary to stderr."""
    if frame is not None and csv_file_path is not None:
        frame.to_csv(path_or_buf=csv_file_path, index=False)

    summary = json.dumps(_to_jsonable({"config": config.to_dict(), **payload}), sort_keys=True)
    if config.output_format == "csv" and frame is not None:
        click.echo(frame.to_csv(index=False), nl=False)
        click.echo(summary, err=True)
        return None

    click.echo(summary)
    return None


def _parse_number(text: str) -> Fraction | float:
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def _parse_digits(text: str) -> DigitWord:
    try:
        return DigitWord.from_line(text)
    except ValueError as exception:
        raise click.BadParameter(str(exception), param_hint="--digits") from exception


def _parse_subsequence(text: str) -> list[int]:
    try:
        indices = [int(index) for index in text.split(",")]
    except ValueError as exception:
        message = f"Expected comma-separated positive integers; received '{text}'."
        raise click.BadParameter(message, param_hint="--subsequence") from exception
    if any(index < 1 for index in indices):
        message = f"Subsequence indices start at 1; received '{text}'."
        raise click.BadParameter(message, param_hint="--subsequence")

    return indices


@click.group(name="fast_lyapunov_spectra")
def _fast_lyapunov_spectra_cli() -> None:
    """Markov-Rényi maps, fast Lyapunov spectra, and the constructions behind their dimension formulas."""


@_fast_lyapunov_spectra_cli.group(name="map")
def _map_group() -> None:
    """Inspect Markov-Rényi maps."""


@_map_group.command(name="check")
@_map_option
@click.option(
    "--samples_per_branch",
    help="The number of sample points per branch for the derivative checks.",
    required=False,
    type=click.IntRange(min=2),
    default=16,
)
@click.option(
    "--branch_horizon",
    help="The number of branches of an infinite family that are checked.",
    required=False,
    type=click.IntRange(min=2),
    default=64,
)
def _map_check_cli(map_source: str, samples_per_branch: int, branch_horizon: int) -> None:
    config = RunConfig(
        subcommand="map check",
        map_source=map_source,
        parameters={"samples_per_branch": samples_per_branch, "branch_horizon": branch_horizon},
    )
    map_spec = load_map(map_source, branch_horizon=branch_horizon)
    report = validate_hypotheses(map_spec, samples_per_branch=samples_per_branch, branch_horizon=branch_horizon)

    _emit(config=config, payload=report.to_dict())

    return None


@_fast_lyapunov_spectra_cli.command(name="orbit")
@_map_option
@click.option("--x", help="The starting point as an exact rational 'p/q'.", required=True, type=str)
@click.option("--depth", help="The number of orbit points.", required=False, type=click.IntRange(min=0), default=10)
@_output_format_option
def _orbit_cli(map_source: str, x: str, depth: int, output_format: str) -> None:
    config = RunConfig(subcommand="orbit", map_source=map_source, depth=depth, output_format=output_format)
    orbit_record = encode(load_map(map_source), x, depth=depth)

    frame = pd.DataFrame(
        {
            "n": np.arange(1, depth + 1),
            "orbit_point": [format_fraction(point) for point in orbit_record.orbit],
            "digit": list(orbit_record.word.digits),
            "log_derivative": list(orbit_record.derivative_logs),
        }
    )
    payload = {
        "point": orbit_record.point,
        "word": orbit_record.word,
        "orbit": list(orbit_record.orbit),
        "derivative_logs": list(orbit_record.derivative_logs),
    }
    _emit(config=config, payload=payload, frame=frame)

    return None


@_fast_lyapunov_spectra_cli.command(name="code")
@_map_option
@click.option("--digits", help="A comma-separated digit word, e.g. '1,2,3'.", required=True, type=str)
@click.option(
    "--periodic",
    help="Repeat the digit word forever instead of stopping at its end.",
    is_flag=True,
    default=False,
)
@click.option(
    "--tolerance",
    help="Stop at the first cylinder with a diameter below this value.",
    required=False,
    type=click.FloatRange(min=0, min_open=True),
    default=1e-12,
)
def _code_cli(map_source: str, digits: str, periodic: bool, tolerance: float) -> None:
    config = RunConfig(
        subcommand="code",
        map_source=map_source,
        tolerance=tolerance,
        parameters={"digits": digits, "periodic": periodic},
    )
    word = _parse_digits(digits)
    digit_stream = itertools.cycle(word.digits) if periodic else iter(word.digits)

    deepest_cylinder = decode(load_map(map_source), digit_stream, tolerance=tolerance, exact=True)
    payload = {
        "point": deepest_cylinder.midpoint,
        "point_float": float(deepest_cylinder.midpoint),
        "digits_used": len(deepest_cylinder.word),
        "cylinder": deepest_cylinder.to_row(),
    }
    _emit(config=config, payload=payload)

    return None


@_fast_lyapunov_spectra_cli.command(name="cylinder")
@_map_option
@click.option("--digits", help="A comma-separated digit word, e.g. '1,2,3'.", required=False, type=str, default=None)
@click.option(
    "--words_file_path",
    help="A file with one comma-separated digit word per line; overrides --digits.",
    required=False,
    type=click.Path(exists=True, dir_okay=False),
    default=None,
)
@click.option(
    "--mode",
    help="Exact rational endpoints, outward-rounded endpoints, or exact within the bit budget.",
    required=False,
    type=click.Choice(["auto", "exact", "outward"]),
    default="auto",
)
@click.option(
    "--bit_budget",
    help="The largest number of bits an exact representation may need.",
    required=False,
    type=click.IntRange(min=1),
    default=2**20,
)
@_maximum_number_of_workers_option
@_output_format_option
@_csv_file_path_option
def _cylinder_cli(
    map_source: str,
    digits: str | None,
    words_file_path: str | None,
    mode: str,
    bit_budget: int,
    maximum_number_of_workers: int,
    output_format: str,
    csv_file_path: str | None,
) -> None:
    if digits is None and words_file_path is None:
        raise click.UsageError("Provide either --digits or --words_file_path.")

    config = RunConfig(
        subcommand="cylinder",
        map_source=map_source,
        output_format=output_format,
        maximum_number_of_workers=maximum_number_of_workers,
        parameters={"digits": digits, "words_file_path": words_file_path, "mode": mode, "bit_budget": bit_budget},
    )
    words = read_digit_words(words_file_path) if words_file_path is not None else [_parse_digits(digits)]
    cylinders = compute_cylinders(
        load_map(map_source),
        words,
        mode=mode,
        bit_budget=bit_budget,
        maximum_number_of_workers=maximum_number_of_workers,
    )

    rows = [cylinder_interval.to_row() for cylinder_interval in cylinders]
    bound_violations = [
        cylinder_interval.word for cylinder_interval in cylinders if not cylinder_interval.satisfies_diameter_bounds()
    ]
    payload = {"cylinders": rows, "diameter_bound_violations": bound_violations}
    _emit(config=config, payload=payload, frame=pd.DataFrame(rows), csv_file_path=csv_file_path)

    return None


@_fast_lyapunov_spectra_cli.command(name="exponent")
@_map_option
@click.option("--x", help="The starting point as an exact rational 'p/q'.", required=False, type=str, default=None)
@click.option(
    "--random_points",
    help="Instead of --x, draw this many random rationals whose orbits stay in the repeller for the whole depth.",
    required=False,
    type=click.IntRange(min=1),
    default=None,
)
@click.option("--depth", help="The orbit length.", required=False, type=click.IntRange(min=2), default=30)
@click.option(
    "--psi",
    "psi_source",
    help="A scaling function for the fast exponent partials, e.g. 'power:2'.",
    required=False,
    type=str,
    default=None,
)
@click.option(
    "--window",
    help="The final window of the tail estimates; defaults to the whole orbit.",
    required=False,
    type=click.IntRange(min=1),
    default=None,
)
@click.option("--seed", help="The seed of the random points.", required=False, type=int, default=0)
@_output_format_option
@_csv_file_path_option
def _exponent_cli(
    map_source: str,
    x: str | None,
    random_points: int | None,
    depth: int,
    psi_source: str | None,
    window: int | None,
    seed: int,
    output_format: str,
    csv_file_path: str | None,
) -> None:
    if (x is None) == (random_points is None):
        raise click.UsageError("Provide exactly one of --x and --random_points.")

    config = RunConfig(
        subcommand="exponent",
        map_source=map_source,
        psi_source=psi_source,
        depth=depth,
        window=window,
        seed=seed,
        output_format=output_format,
        parameters={"x": x, "random_points": random_points},
    )
    map_spec = load_map(map_source)

    if random_points is not None:
        orbit_records = random_repeller_points(map_spec, count=random_points, depth=depth, seed=seed)
        violations_by_point = {
            format_fraction(orbit_record.point): chain_rule_violations(
                trace_from_orbit(orbit_record), map_spec.gamma, map_spec.distortion_constant
            )
            for orbit_record in orbit_records
        }
        payload = {
            "number_of_points": len(orbit_records),
            "number_of_violations": sum(len(violations) for violations in violations_by_point.values()),
            "violations": {point: violations for point, violations in violations_by_point.items() if violations},
        }
        _emit(config=config, payload=payload)
        return None

    exponent_trace = trace(map_spec, x, depth=depth)
    statistics = digit_statistics(exponent_trace.word, window=window)
    payload = {
        "word": exponent_trace.word,
        "lyapunov_partial": exponent_trace.lyapunov_partials[-1],
        "chain_rule_violations": chain_rule_violations(exponent_trace, map_spec.gamma, map_spec.distortion_constant),
        "kappa_estimate": statistics.kappa_estimate,
        "tau_estimate": statistics.tau_estimate,
    }

    psi = None
    if psi_source is not None:
        psi = load_scaling_function(psi_source)
        partials = fast_exponent_partials(exponent_trace, psi, window=window)
        payload["fast_upper_estimate"] = partials.upper_estimate
        payload["fast_lower_estimate"] = partials.lower_estimate

    _emit(config=config, payload=payload, frame=exponent_trace.to_frame(psi=psi), csv_file_path=csv_file_path)

    return None


@_fast_lyapunov_spectra_cli.command(name="scaling")
@click.option("--psi", "psi_source", help="The scaling function, e.g. 'power:2'.", required=True, type=str)
@click.option("--horizon", help="The largest index used.", required=False, type=click.IntRange(min=4), default=10_000)
@click.option(
    "--window",
    help="The final window of the tail estimates; defaults to a quarter of the horizon.",
    required=False,
    type=click.IntRange(min=1),
    default=None,
)
@click.option(
    "--tolerance",
    help="The tolerance of the equivalence-to-increasing heuristic.",
    required=False,
    type=click.FloatRange(min=0, min_open=True),
    default=0.1,
)
@click.option("--include_xi", help="Also estimate xi, reading psi as a growth rate.", is_flag=True, default=False)
def _scaling_cli(psi_source: str, horizon: int, window: int | None, tolerance: float, include_xi: bool) -> None:
    config = RunConfig(
        subcommand="scaling",
        psi_source=psi_source,
        horizon=horizon,
        window=window,
        tolerance=tolerance,
        parameters={"include_xi": include_xi},
    )
    psi = load_scaling_function(psi_source)
    scaling_invariants = invariants(psi, horizon=horizon, window=window, include_xi=include_xi, tolerance=tolerance)
    equivalence = is_equivalent_increasing(psi, horizon=horizon, tolerance=tolerance)

    payload = {
        "invariants": scaling_invariants.to_dict(),
        "equivalence": {"flag": equivalence.flag, "label": equivalence.label, "window": equivalence.window},
    }
    _emit(config=config, payload=payload)

    return None


@_fast_lyapunov_spectra_cli.command(name="spectrum")
@_map_option
@click.option("--psi", "psi_source", help="The scaling function, e.g. 'power:2'.", required=True, type=str)
@click.option(
    "--alpha",
    help="The level class: 0, a finite positive level, or infinity.",
    required=False,
    type=click.Choice(sorted(_ALPHA_CLASSES)),
    default="finite",
)
@click.option(
    "--which",
    help="The fast, upper or lower spectrum, or the classical spectrum at infinity.",
    required=False,
    type=click.Choice(["fast", "upper", "lower", "classical_at_infinity"]),
    default="fast",
)
@click.option("--horizon", help="The largest index used.", required=False, type=click.IntRange(min=4), default=10_000)
@click.option(
    "--window",
    help="The final window of the tail estimates; defaults to a quarter of the horizon.",
    required=False,
    type=click.IntRange(min=1),
    default=None,
)
@click.option(
    "--tolerance",
    help="The tolerance of the equivalence-to-increasing heuristic.",
    required=False,
    type=click.FloatRange(min=0, min_open=True),
    default=0.1,
)
@click.option(
    "--allow_violations",
    help="Proceed when the map fails a blocking hypothesis; the failure is written to the error collection.",
    is_flag=True,
    default=False,
)
def _spectrum_cli(
    map_source: str,
    psi_source: str,
    alpha: str,
    which: str,
    horizon: int,
    window: int | None,
    tolerance: float,
    allow_violations: bool,
) -> None:
    config = RunConfig(
        subcommand="spectrum",
        map_source=map_source,
        psi_source=psi_source,
        horizon=horizon,
        window=window,
        tolerance=tolerance,
        parameters={"alpha": alpha, "which": which, "allow_violations": allow_violations},
    )
    map_spec = load_map(map_source)
    validate_hypotheses(map_spec).require_valid(allow_violations=allow_violations)

    scaling_invariants = invariants(
        load_scaling_function(psi_source), horizon=horizon, window=window, tolerance=tolerance
    )
    query = SpectrumQuery(
        gamma=map_spec.gamma, invariants=scaling_invariants, alpha_class=_ALPHA_CLASSES[alpha], which=which
    )
    spectrum_value = evaluate_spectrum(query)

    payload = {
        **spectrum_value.to_dict(),
        "invariants": scaling_invariants.to_dict(),
        "continuous_at_infinity": is_continuous_at_infinity(map_spec.gamma, scaling_invariants),
    }
    _emit(config=config, payload=payload)

    return None


@_fast_lyapunov_spectra_cli.command(name="gpsi")
@click.option("--psi", "psi_source", help="The scaling function, e.g. 'power:2'.", required=True, type=str)
@click.option(
    "--epsilon",
    help="The rate slack.",
    required=False,
    type=click.FloatRange(min=0, min_open=True),
    default=0.5,
)
@click.option("--horizon", help="The last index computed.", required=False, type=click.IntRange(min=4), default=1_000)
@click.option(
    "--method",
    help="The infimum construction or the anchor construction of the three b-cases.",
    required=False,
    type=click.Choice(["simple", "appendix"]),
    default="simple",
)
@click.option(
    "--case",
    help="Force the b-case of the anchor construction instead of classifying the estimate of b.",
    required=False,
    type=click.Choice(["b_infinite", "b_finite", "b_one"]),
    default=None,
)
@click.option(
    "--b", help="The value of b; defaults to its windowed estimate.", required=False, type=float, default=None
)
@_output_format_option
@_csv_file_path_option
def _gpsi_cli(
    psi_source: str,
    epsilon: float,
    horizon: int,
    method: str,
    case: str | None,
    b: float | None,
    output_format: str,
    csv_file_path: str | None,
) -> None:
    config = RunConfig(
        subcommand="gpsi",
        psi_source=psi_source,
        horizon=horizon,
        output_format=output_format,
        parameters={"epsilon": epsilon, "method": method, "case": case, "b": b},
    )
    psi = load_scaling_function(psi_source)
    if method == "simple":
        result = gpsi_simple(psi, epsilon=epsilon, horizon=horizon, b=b)
    else:
        result = gpsi_appendix(psi, epsilon=epsilon, horizon=horizon, b=b, case=case)

    violations = result.check_properties()
    payload = {
        "case_label": result.case_label,
        "b_estimate": result.b_estimate,
        "complete": result.complete,
        "contact_indices": list(result.contact_indices),
        "epsilon_schedule": list(result.epsilon_schedule),
        "crossovers": [
            {"j": record.j, "n_j": record.n_j, "n_next": record.n_next, "n_hat": record.n_hat}
            for record in result.crossovers
        ],
        "violations": violations,
        "satisfies_properties": not any(violations.values()),
    }
    _emit(config=config, payload=payload, frame=result.to_frame(), csv_file_path=csv_file_path)

    return None


def _sequence_pair(s: str, t: str | None) -> SequencePair:
    s_generator = load_sequence_generator(s)
    return SequencePair(s=s_generator, t=load_sequence_generator(t) if t is not None else s_generator)


_s_option = click.option(
    "--s",
    "s_source",
    help="The window offsets s_n: 'exp[:base]', 'double_exp:b:c[:k]', 'const:v' or a CSV table.",
    required=False,
    type=str,
    default="exp",
)
_t_option = click.option(
    "--t",
    "t_source",
    help="The window widths t_n in the same notation; defaults to s_n.",
    required=False,
    type=str,
    default=None,
)


@_fast_lyapunov_spectra_cli.group(name="eset")
def _eset_group() -> None:
    """Digits and dimension of E({s_n}, {t_n}), the points with s_n < a_n <= s_n + t_n."""


@_eset_group.command(name="digits")
@_s_option
@_t_option
@click.option("--depth", help="The word length.", required=False, type=click.IntRange(min=0), default=5)
@click.option(
    "--rule",
    help="The smallest digit of each window, or the one nearest its middle.",
    required=False,
    type=click.Choice(["smallest", "midpoint"]),
    default="smallest",
)
def _eset_digits_cli(s_source: str, t_source: str | None, depth: int, rule: str) -> None:
    config = RunConfig(
        subcommand="eset digits", depth=depth, parameters={"s": s_source, "t": t_source, "rule": rule}
    )
    word = e_set_digits(_sequence_pair(s=s_source, t=t_source), depth=depth, rule=rule)

    _emit(config=config, payload={"digits": word})

    return None


@_eset_group.command(name="dim")
@_map_option
@_s_option
@_t_option
@click.option(
    "--depth",
    help="The deepest order of basic intervals.",
    required=False,
    type=click.IntRange(min=1),
    default=3,
)
@click.option(
    "--digit_cap",
    help="The largest digit any window may reach.",
    required=False,
    type=click.IntRange(min=2),
    default=64,
)
@click.option(
    "--formula_horizon",
    help="The horizon of the truncated dimension quotient.",
    required=False,
    type=click.IntRange(min=1),
    default=1_000,
)
@click.option(
    "--gamma",
    help="The exponent in the dimension quotient; defaults to the map's gamma.",
    required=False,
    type=float,
    default=None,
)
@click.option(
    "--node_budget",
    help="The largest number of basic intervals over all levels.",
    required=False,
    type=click.IntRange(min=1),
    default=10**6,
)
@_maximum_number_of_workers_option
@_output_format_option
@_csv_file_path_option
def _eset_dim_cli(
    map_source: str,
    s_source: str,
    t_source: str | None,
    depth: int,
    digit_cap: int,
    formula_horizon: int,
    gamma: float | None,
    node_budget: int,
    maximum_number_of_workers: int,
    output_format: str,
    csv_file_path: str | None,
) -> None:
    config = RunConfig(
        subcommand="eset dim",
        map_source=map_source,
        depth=depth,
        horizon=formula_horizon,
        output_format=output_format,
        maximum_number_of_workers=maximum_number_of_workers,
        parameters={
            "s": s_source,
            "t": t_source,
            "digit_cap": digit_cap,
            "gamma": gamma,
            "node_budget": node_budget,
        },
    )
    map_spec = load_map(map_source)
    pair = _sequence_pair(s=s_source, t=t_source)

    tree = enumerate_basic_intervals(
        map_spec,
        pair,
        depth=depth,
        digit_cap=digit_cap,
        node_budget=node_budget,
        maximum_number_of_workers=maximum_number_of_workers,
    )
    measured = {
        "m": list(tree.m),
        "counts": list(tree.counts),
        "min_gaps": [float(gap) for gap in tree.min_gaps],
        "max_diameters": [float(diameter) for diameter in tree.max_diameters],
        "log_gap_bounds": list(tree.log_gap_bounds),
        "theta": tree.theta,
        "gaps_dominate_bound": tree.gaps_dominate_bound,
        "nesting_violations": len(tree.nesting_violations()),
    }
    if depth >= 2:
        measured["falconer_lower"] = falconer_lower(tree.m, tree.min_gaps).to_dict()
        measured["cover_upper"] = cover_upper(tree.counts, tree.max_diameters).to_dict()

    formula = e_set_dimension_formula(
        pair, gamma=gamma if gamma is not None else float(map_spec.gamma), horizon=formula_horizon
    )
    payload = {"measured": measured, "formula": formula.to_dict()}
    _emit(config=config, payload=payload, frame=tree.to_frame(), csv_file_path=csv_file_path)

    return None


@_fast_lyapunov_spectra_cli.command(name="dset")
@click.option("--b", "b_text", help="The base b > 1, e.g. '2' or '3/2'.", required=False, type=str, default="2")
@click.option("--c", "c_text", help="The exponent base c > 1.", required=False, type=str, default="2")
@click.option("--depth", help="The word length.", required=False, type=click.IntRange(min=0), default=4)
@click.option(
    "--mode",
    help="Constrain every prefix, or only the prefixes along a subsequence.",
    required=False,
    type=click.Choice(["eventually", "infinitely_often"]),
    default="eventually",
)
@click.option(
    "--subsequence",
    help="A comma-separated list of constrained indices for infinitely_often; defaults to the powers of two.",
    required=False,
    type=str,
    default=None,
)
@click.option(
    "--witness_d",
    help="Also list the Łuczak witnesses for this d with 1 < d < c.",
    required=False,
    type=float,
    default=None,
)
@click.option(
    "--bit_budget",
    help="The largest number of bits a target b^(c^n) may need.",
    required=False,
    type=click.IntRange(min=1),
    default=2**20,
)
def _dset_cli(
    b_text: str, c_text: str, depth: int, mode: str, subsequence: str | None, witness_d: float | None, bit_budget: int
) -> None:
    split_subsequence = _parse_subsequence(subsequence) if subsequence is not None else None
    config = RunConfig(
        subcommand="dset",
        depth=depth,
        parameters={
            "b": b_text,
            "c": c_text,
            "mode": mode,
            "subsequence": split_subsequence,
            "witness_d": witness_d,
            "bit_budget": bit_budget,
        },
    )
    b, c = _parse_number(b_text), _parse_number(c_text)
    word = d_set_digits(b, c, depth=depth, mode=mode, subsequence=split_subsequence, bit_budget=bit_budget)

    payload = {"digits": word}
    if witness_d is not None:
        payload["witnesses"] = luczak_witnesses(word, b=float(b), c=float(c), d=witness_d)
    _emit(config=config, payload=payload)

    return None


@_fast_lyapunov_spectra_cli.command(name="count-oracle")
@click.option(
    "--n",
    help="The tuple length; every length up to 4 when omitted.",
    required=False,
    type=click.IntRange(min=1, max=4),
    default=None,
)
@click.option(
    "--k",
    help="The dyadic scale; every scale up to 4 when omitted.",
    required=False,
    type=click.IntRange(min=0, max=4),
    default=None,
)
def _count_oracle_cli(n: int | None, k: int | None) -> None:
    config = RunConfig(subcommand="count-oracle", parameters={"n": n, "k": k})
    lengths = [n] if n is not None else range(1, 5)
    scales = [k] if k is not None else range(0, 5)

    counts = []
    for length in lengths:
        for scale in scales:
            product_tuple_count = count_product_tuples(n=length, k=scale)
            counts.append(
                {
                    "n": length,
                    "k": scale,
                    "count": product_tuple_count.count,
                    "bound": product_tuple_count.bound,
                    "within_bound": product_tuple_count.within_bound,
                }
            )
    _emit(config=config, payload={"counts": counts})

    return None


@_fast_lyapunov_spectra_cli.command(name="fsw")
@click.option("--psi", "psi_source", help="The scaling function, e.g. 'exp:2'.", required=True, type=str)
@click.option(
    "--alpha",
    help="The level.",
    required=False,
    type=click.FloatRange(min=0, min_open=True),
    default=1.0,
)
@click.option(
    "--epsilon",
    help="The rate slack.",
    required=False,
    type=click.FloatRange(min=0, min_open=True),
    default=0.5,
)
@click.option("--horizon", help="The last index computed.", required=False, type=click.IntRange(min=4), default=1_000)
@click.option(
    "--B",
    "envelope_rate",
    help="The value of B; defaults to its windowed estimate.",
    required=False,
    type=float,
    default=None,
)
@_output_format_option
@_csv_file_path_option
def _fsw_cli(
    psi_source: str,
    alpha: float,
    epsilon: float,
    horizon: int,
    envelope_rate: float | None,
    output_format: str,
    csv_file_path: str | None,
) -> None:
    config = RunConfig(
        subcommand="fsw",
        psi_source=psi_source,
        horizon=horizon,
        output_format=output_format,
        parameters={"alpha": alpha, "epsilon": epsilon, "B": envelope_rate},
    )
    envelope = fsw_sequence(
        load_scaling_function(psi_source), alpha=alpha, epsilon=epsilon, horizon=horizon, B=envelope_rate
    )

    payload = {"B": envelope.B, "checks": envelope.checks().to_dict()}
    _emit(config=config, payload=payload, frame=envelope.to_frame(), csv_file_path=csv_file_path)

    return None


def run(argv: Sequence[str] | None = None) -> int:
    """
    Run one command; returns 0 on success, 1 on domain errors, and 2 on usage errors.

    Data goes to stdout and diagnostics to stderr.
    """
    try:
        exit_code = _fast_lyapunov_spectra_cli.main(
            args=list(argv) if argv is not None else None, prog_name="fast_lyapunov_spectra", standalone_mode=False
        )
    except click.UsageError as exception:
        exception.show()
        return exception.exit_code
    except click.ClickException as exception:
        exception.show()
        return 1
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except (MarkovRenyiError, ValueError, OSError) as exception:
        click.echo(f"Error: {exception}", err=True)
        return 1

    return exit_code if isinstance(exit_code, int) else 0


def main() -> None:
    sys.exit(run())
