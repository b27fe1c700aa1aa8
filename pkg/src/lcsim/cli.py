"""Command-line front end.

Every subcommand accepts ``--seed`` (drawn from OS entropy when omitted)
and emits a one-line JSON run manifest on stderr recording the command,
the seed, the generator, the parameter set, the wall time, and a SHA-256
checksum of the data output.  Re-running with the manifest's seed
reproduces the data output byte for byte, regardless of ``--threads``.

Exit codes: 0 on success, 2 for invalid input, 3 when a computation
exceeds its resource budget.
"""

from __future__ import annotations

import functools
import hashlib
import json
import secrets
import sys
import time

import click

from . import __version__
from .bounds import bounds_table
from .core import Sequence, lcs_backtrack, lcs_dp, lcs_wmmm
from .errors import ResourceLimitError, ValidationError
from .generate import (
    DEFAULT_MIXTURE_SEGMENTS,
    RNG_ALGORITHM,
    DistributionSpec,
    IidPairSource,
    MixturePairSource,
    MixtureSpec,
    RngHandle,
    SharedInsertPairSource,
    default_segment_count,
)
from .montecarlo import SCAN_CSV_HEADER, SCAN_CSV_SCHEMA, fit_power_law, histogram, variance_scan
from .ztest import TestParams, calibrate, run_test, simulate_statistics, z_statistic

EXIT_VALIDATION = 2
EXIT_RESOURCE = 3

MANIFEST_SCHEMA = "lcsim.manifest/1"
PARAMS_SCHEMA = "lcsim.params/1"
TEST_SCHEMA = "lcsim.test_result/1"
POWER_SCHEMA = "lcsim.power/1"
BOUNDS_CSV_SCHEMA = "lcsim.bounds/1"
HIST_CSV_SCHEMA = "lcsim.hist/1"


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            _fail(str(exc), EXIT_VALIDATION)
        except ResourceLimitError as exc:
            _fail(str(exc), EXIT_RESOURCE)

    return wrapper


def _resolve_seed(seed: int | None) -> int:
    return secrets.randbits(63) if seed is None else seed


def _emit(payload: str, out_path: str | None) -> str:
    """Write the data payload to stdout or --out; return its checksum."""
    data = payload if payload.endswith("\n") else payload + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(data)
    else:
        click.echo(data, nl=False)
    return hashlib.sha256(data.encode("utf-8")).hexdigest()


def _sha256_file(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _manifest(command: str, seed: int | None, generator: dict | None,
              params: dict, started: float, output_sha256: str | None) -> None:
    record = {
        "schema": MANIFEST_SCHEMA,
        "command": command,
        "argv": sys.argv[1:],
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "generator": generator,
        "params": params,
        "wall_time_s": round(time.perf_counter() - started, 3),
        "output_sha256": output_sha256,
    }
    click.echo(json.dumps(record), err=True)


def _read_sequence(path: str, alphabet: str) -> Sequence:
    with open(path, "r", encoding="utf-8") as fh:
        text = "".join(fh.read().split())
    return Sequence.from_string(text, alphabet)


def _parse_probs(text: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ValidationError(f"cannot parse probabilities from {text!r}") from None


def _parse_grid(text: str) -> list:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"grid must be START:STEP:STOP, got {text!r}")
    try:
        start, step, stop = (int(p.replace(",", "")) for p in parts)
    except ValueError:
        raise ValidationError(f"grid must be integers START:STEP:STOP, got {text!r}") from None
    if start < 1 or step < 1 or stop < start:
        raise ValidationError(f"bad grid range {text!r}")
    return list(range(start, stop + 1, step))


def _parse_m_range(text: str) -> tuple:
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
    else:
        lo_text = hi_text = text
    try:
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise ValidationError(f"m must be an integer or LO..HI, got {text!r}") from None
    return lo, hi


def _load_params(params_path: str | None, gamma_star: float | None, c: float | None,
                 alpha: float) -> TestParams:
    if params_path:
        with open(params_path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        loaded = TestParams.from_dict(data)
        return TestParams(**{**loaded.to_dict(), "alpha": alpha})
    if gamma_star is None or c is None:
        raise ValidationError("provide --params FILE or both --gamma-star and --c")
    return TestParams(gamma_star=gamma_star, c=c, alpha=alpha)


def _alt_source(alt: str, n: int, m_len: int | None, segments: int | None, mix: str,
                alphabet_size: int):
    if alt == "null":
        return IidPairSource(n, DistributionSpec.uniform(alphabet_size))
    if m_len is None:
        raise ValidationError(f"--m-len is required for --alt {alt}")
    if alt == "common":
        if segments is None:
            segments = default_segment_count(n, m_len)
        return SharedInsertPairSource(n, m_len, segments, alphabet_size)
    if alt == "mixture":
        if segments is None:
            segments = min(DEFAULT_MIXTURE_SEGMENTS, n - m_len)
        probs = _parse_probs(mix)
        if len(probs) != 4:
            raise ValidationError(f"--mix needs 4 probabilities, got {len(probs)}")
        return MixturePairSource(n, m_len, segments, MixtureSpec(*probs), alphabet_size)
    raise ValidationError(f"unknown alternative {alt!r}")


@click.group()
@click.version_option(version=__version__, prog_name="lcsim")
def main():
    """LCS statistics: exact lengths, Monte-Carlo scans, similarity tests,
    and multi-sequence upper bounds."""


@main.command("lcs")
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False))
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False))
@click.option("--alphabet", default="01", show_default=True,
              help="Positional alphabet used to decode both files.")
@click.option("--algorithm", type=click.Choice(["wmmm", "band", "bitparallel", "dp"]),
              default="wmmm", show_default=True)
@click.option("--witness", is_flag=True, help="Also print one optimal common subsequence.")
@click.option("--seed", type=int, default=None, help="Recorded in the manifest (unused here).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guarded
def cmd_lcs(file_a, file_b, alphabet, algorithm, witness, seed, out):
    """Print the LCS length of the sequences in FILE_A and FILE_B."""
    started = time.perf_counter()
    a = _read_sequence(file_a, alphabet)
    b = _read_sequence(file_b, alphabet)
    if algorithm == "dp":
        length = lcs_dp(a, b)
    else:
        engine = "auto" if algorithm == "wmmm" else algorithm
        length = lcs_wmmm(a, b, engine=engine)
    lines = [str(length)]
    if witness:
        lines.append(lcs_backtrack(a, b).to_string(alphabet))
    sha = _emit("\n".join(lines), out)
    _manifest("lcs", seed, None,
              {"alphabet": alphabet, "algorithm": algorithm, "witness": witness,
               "len_a": len(a), "len_b": len(b)},
              started, sha)


@main.command("simulate")
@click.option("--dist", default=None, help="Comma-separated letter probabilities.")
@click.option("--k", "k", type=int, default=None, help="Uniform alphabet size (alternative to --dist).")
@click.option("--grid", default=None, help="Length grid START:STEP:STOP (inclusive).")
@click.option("--n", "n_single", type=int, default=None, help="Single length instead of --grid.")
@click.option("--reps", type=int, required=True, help="Replicates per grid point.")
@click.option("--seed", type=int, default=None)
@click.option("--threads", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="CSV destination (default: stdout).")
@_guarded
def cmd_simulate(dist, k, grid, n_single, reps, seed, threads, out):
    """Monte-Carlo scan of LCS mean/variance over a length grid, with a
    log-log power-law fit when the grid has at least two points."""
    started = time.perf_counter()
    if (dist is None) == (k is None):
        raise ValidationError("provide exactly one of --dist or --k")
    spec = DistributionSpec(_parse_probs(dist)) if dist else DistributionSpec.uniform(k)
    if (grid is None) == (n_single is None):
        raise ValidationError("provide exactly one of --grid or --n")
    n_values = _parse_grid(grid) if grid else [n_single]
    seed = _resolve_seed(seed)
    handle = RngHandle(seed)

    if out:
        rows = variance_scan(n_values, spec, reps, handle, threads=threads, csv_path=out)
        sha = _sha256_file(out)
    else:
        rows = variance_scan(n_values, spec, reps, handle, threads=threads)
        lines = [f"# schema={SCAN_CSV_SCHEMA}", SCAN_CSV_HEADER]
        lines.extend(stats.csv_row() for _, stats in rows)
        sha = _emit("\n".join(lines), None)
    fit_info = None
    if len(rows) >= 2:
        fit = fit_power_law([(n, stats.variance) for n, stats in rows])
        fit_info = {"slope": fit.slope, "coeff": fit.intercept_coeff,
                    "r_squared": fit.r_squared, "points": fit.points_used}
        click.echo(fit.summary(), err=out is None)
    _manifest("simulate", seed, {"generator": "iid-pair", "probs": list(spec.probs)},
              {"grid": n_values, "reps": reps, "threads": threads, "fit": fit_info,
               "out": out},
              started, sha)


@main.command("calibrate")
@click.option("--k", type=int, default=4, show_default=True)
@click.option("--n-cal", type=int, default=100_000, show_default=True)
@click.option("--reps", type=int, default=529, show_default=True)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--threads", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guarded
def cmd_calibrate(k, n_cal, reps, alpha, seed, threads, out):
    """Estimate the test rates (gamma_star, c) from uniform i.i.d. pairs."""
    started = time.perf_counter()
    seed = _resolve_seed(seed)
    params = calibrate(n_cal, reps, k, RngHandle(seed), threads=threads, alpha=alpha)
    payload = json.dumps({"schema": PARAMS_SCHEMA, **params.to_dict()}, indent=2)
    sha = _emit(payload, out)
    _manifest("calibrate", seed, {"generator": "iid-pair", "k": k},
              {"n_cal": n_cal, "reps_cal": reps, "alpha": alpha, "threads": threads},
              started, sha)


@main.command("test")
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False), required=False)
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--alphabet", default="ACGT", show_default=True)
@click.option("--generate", "generate_alt",
              type=click.Choice(["null", "common", "mixture"]), default=None,
              help="Generate the tested pair instead of reading files.")
@click.option("--n", "n_gen", type=int, default=10_000, show_default=True,
              help="Nominal length for --generate.")
@click.option("--m-len", type=int, default=None)
@click.option("--segments", type=int, default=None)
@click.option("--mix", default="0.8,0.1,0.1,0.0", show_default=True)
@click.option("--params", "params_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Calibration JSON from `lcsim calibrate`.")
@click.option("--gamma-star", type=float, default=None)
@click.option("--c", "c_rate", type=float, default=None)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guarded
def cmd_test(file_a, file_b, alphabet, generate_alt, n_gen, m_len, segments, mix,
             params_path, gamma_star, c_rate, alpha, seed, out):
    """Z-test two sequences for unusual similarity (reject = similar)."""
    started = time.perf_counter()
    params = _load_params(params_path, gamma_star, c_rate, alpha)
    generator = None
    if generate_alt is not None:
        seed = _resolve_seed(seed)
        source = _alt_source(generate_alt, n_gen, m_len, segments, mix, len(alphabet))
        x, y = source.sample(RngHandle(seed).generator())
        generator = source.describe()
        nominal = source.n
        lc = lcs_wmmm(x, y)
        s = z_statistic(lc, nominal, params)
        crit = params.critical_value()
        result = {"lc_obs": lc, "s": s, "critical_value": crit, "reject": s > crit}
    elif file_a and file_b:
        a = _read_sequence(file_a, alphabet)
        b = _read_sequence(file_b, alphabet)
        result = run_test(a, b, params).to_dict()
    else:
        raise ValidationError("provide FILE_A FILE_B or --generate")
    payload = json.dumps({"schema": TEST_SCHEMA, **result, "params": params.to_dict()},
                         indent=2)
    sha = _emit(payload, out)
    _manifest("test", seed, generator, {"alpha": params.alpha}, started, sha)


@main.command("power")
@click.option("--alt", type=click.Choice(["null", "common", "mixture"]), required=True)
@click.option("--n", "n_len", type=int, default=10_000, show_default=True)
@click.option("--m-len", type=int, default=None)
@click.option("--segments", type=int, default=None,
              help="Pieces the shared word is cut into (default: one per 100 symbols).")
@click.option("--mix", default="0.8,0.1,0.1,0.0", show_default=True)
@click.option("--alphabet-size", type=int, default=4, show_default=True)
@click.option("--params", "params_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--gamma-star", type=float, default=None)
@click.option("--c", "c_rate", type=float, default=None)
@click.option("--alpha", type=float, default=0.05, show_default=True)
@click.option("--reps", type=int, required=True)
@click.option("--seed", type=int, default=None)
@click.option("--threads", type=int, default=None)
@click.option("--bins", type=int, default=30, show_default=True)
@click.option("--hist", "hist_path", type=click.Path(dir_okay=False), default=None,
              help="Write a histogram CSV of the S statistics here.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_guarded
def cmd_power(alt, n_len, m_len, segments, mix, alphabet_size, params_path, gamma_star,
              c_rate, alpha, reps, seed, threads, bins, hist_path, out):
    """Estimate p = P(S <= z(1-alpha)) for a generated alternative."""
    started = time.perf_counter()
    params = _load_params(params_path, gamma_star, c_rate, alpha)
    source = _alt_source(alt, n_len, m_len, segments, mix, alphabet_size)
    seed = _resolve_seed(seed)
    stats = simulate_statistics(source, params, reps, RngHandle(seed), threads=threads)
    crit = params.critical_value()
    p = float((stats <= crit).mean())
    payload = json.dumps({
        "schema": POWER_SCHEMA,
        "p": p,
        "reps": reps,
        "critical_value": crit,
        "generator": source.describe(),
        "params": params.to_dict(),
    }, indent=2)
    sha = _emit(payload, out)
    if hist_path:
        counts, edges = histogram(stats, bins)
        lines = [f"# schema={HIST_CSV_SCHEMA}", "bin_lo,bin_hi,count"]
        lines.extend(f"{edges[i]!r},{edges[i + 1]!r},{int(counts[i])}"
                     for i in range(len(counts)))
        with open(hist_path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    _manifest("power", seed, source.describe(),
              {"alpha": params.alpha, "reps": reps, "threads": threads, "hist": hist_path},
              started, sha)


@main.command("bounds")
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--m", "m_range", default="2..10", show_default=True,
              help="Sequence count, a single integer or LO..HI.")
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--seed", type=int, default=None, help="Recorded in the manifest (unused here).")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Also write the table as CSV here.")
@_guarded
def cmd_bounds(k, m_range, tol, seed, out):
    """Upper bounds on the limiting LCS rate for m sequences over k letters."""
    started = time.perf_counter()
    m_min, m_max = _parse_m_range(m_range)
    rows = bounds_table(k, m_min, m_max, tol=tol)
    width = max(len("upper_bound"), 12)
    lines = [f"{'m':>4}  {'upper_bound':<{width}}  lower_bound"]
    for m, upper, lower in rows:
        lower_text = f"{lower:.6f}" if lower is not None else "-"
        lines.append(f"{m:>4}  {upper:<{width}.6f}  {lower_text}")
    sha = _emit("\n".join(lines), None)
    if out:
        csv_lines = [f"# schema={BOUNDS_CSV_SCHEMA}", "k,m,upper_bound,lower_bound"]
        csv_lines.extend(
            f"{k},{m},{upper!r},{lower!r}" if lower is not None else f"{k},{m},{upper!r},"
            for m, upper, lower in rows
        )
        with open(out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(csv_lines) + "\n")
        sha = _sha256_file(out)
    _manifest("bounds", seed, None,
              {"k": k, "m_min": m_min, "m_max": m_max, "tol": tol, "out": out},
              started, sha)


if __name__ == "__main__":
    main()
