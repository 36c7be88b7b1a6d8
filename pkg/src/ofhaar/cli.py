"""Command-line front end for moment queries, oracles, sweeps and checks.

Deformation matrices come in as JSON, either canonical parameters
({"type":"canonical","c":1,"k":1,"rho":["1/2"],"n":2}) or a raw entry grid
({"type":"raw","entries":[["0","1/2"],["2","0"]]}) with rationals as "p/q"
strings.  Every exact value is printed as "p/q" (denominator 1 omitted);
float-mode values carry an explicit precision tag.  Exit codes: 0 success,
1 domain error, 2 usage error.
"""

from __future__ import annotations

import contextlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

import click
import mpmath

from . import deformation
from .asymptotics import (
    convergence_table,
    rows_to_csv,
    standard_word_suite,
)
from .deformation import CanonicalSpec, classify_factor_type
from .fock import TruncatedFock, gc_from_spec, vacuum_expectation
from .freedist import (
    GCSpec,
    GENERALIZED_CIRCULAR,
    SEMICIRCULAR,
    free_moment,
)
from .haar import StarWord, haar_moment, haar_star_moment, variance_matrix
from .partitions import PLAIN, STAR
from .scalars import DEFAULT_PRECISION_BITS, format_scalar, parse_rational
from .symmetry import invariance_check, weak_q_relation_check, weak_unitarity_check
from .weingarten import MAX_WORD_LENGTH, gram_bruteforce, gram_closed, weingarten

CACHE_ENV_VAR = "OFHAAR_CACHE_DIR"

_DOMAIN_ERRORS = (ValueError, RuntimeError, IndexError, KeyError, OSError)


@dataclass
class RunConfig:
    """Everything one invocation needs, independent of the argument parser."""

    subcommand: str
    f_source: str = None
    output_format: str = "json"
    output_path: str = None
    cache_dir: str = None
    mode: str = "exact"
    precision_bits: int = DEFAULT_PRECISION_BITS
    max_word_length: int = MAX_WORD_LENGTH
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 1 <= self.max_word_length <= MAX_WORD_LENGTH:
            raise ValueError(
                f"word-length ceiling must lie in 1..{MAX_WORD_LENGTH}"
            )


def parse_f_spec(text: str):
    """Parse the JSON matrix spec into CanonicalSpec or a raw entry grid."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"F spec parse error at position {exc.pos}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict) or "type" not in doc:
        raise ValueError("F spec must be a JSON object with a 'type' field")
    kind = doc["type"]
    if kind == "canonical":
        missing = [key for key in ("c", "k", "rho", "n") if key not in doc]
        if missing:
            raise ValueError(f"canonical F spec is missing fields {missing}")
        rho = tuple(parse_rational(str(r)) for r in doc["rho"])
        return CanonicalSpec(c=int(doc["c"]), k=int(doc["k"]), rho=rho, n=int(doc["n"]))
    if kind == "raw":
        entries = doc.get("entries")
        if not isinstance(entries, list) or not entries:
            raise ValueError("raw F spec needs a non-empty 'entries' grid")
        return [[str(cell) for cell in row] for row in entries]
    raise ValueError(f"unknown F spec type {kind!r}")


def load_fmatrix(source: str, precision_bits: int = DEFAULT_PRECISION_BITS):
    """Load a matrix from a file path or an inline JSON string."""
    if source is None:
        raise ValueError("no F specification given")
    text = source
    if not source.lstrip().startswith("{"):
        if not os.path.exists(source):
            raise ValueError(f"F spec file not found: {source}")
        with open(source) as handle:
            text = handle.read()
    spec = parse_f_spec(text)
    if isinstance(spec, CanonicalSpec):
        return deformation.build_canonical(spec)
    return deformation.validate(spec, precision_bits=precision_bits)


def _parse_indices(text: str):
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"bad index list {text!r}; expected e.g. '1,2,1,2'") from None


def _parse_eps(text: str):
    tokens = tuple(part.strip() for part in text.split(","))
    bad = [tok for tok in tokens if tok not in (PLAIN, STAR)]
    if bad:
        raise ValueError(f"bad sign tokens {bad!r}; use '1' or '*'")
    return tokens


def _parse_word(options, prefix="") -> StarWord:
    i = _parse_indices(options[prefix + "i"])
    j = _parse_indices(options[prefix + "j"])
    eps_text = options.get(prefix + "eps")
    eps = _parse_eps(eps_text) if eps_text else (PLAIN,) * len(i)
    return StarWord(i, j, eps)


def _emit(config: RunConfig, text: str):
    if config.output_path:
        _write_atomic(config.output_path, text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def _json_text(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _grid_strings(grid):
    return [[format_scalar(x) for x in row] for row in grid]


def _grid_csv(grid) -> str:
    return "\n".join(",".join(format_scalar(x) for x in row) for row in grid) + "\n"


# -- subcommand handlers -----------------------------------------------------


def _cmd_moment(config: RunConfig) -> int:
    fmatrix = load_fmatrix(config.f_source, config.precision_bits)
    word = _parse_word(config.options)
    if len(word) > config.max_word_length:
        raise ValueError(f"word length {len(word)} exceeds ceiling")
    if STAR in word.eps:
        value = haar_star_moment(fmatrix, word, config.cache_dir)
    else:
        value = haar_moment(fmatrix, word.i, word.j, config.cache_dir)
    _emit(config, format_scalar(value))
    return 0


def _cmd_gram(config: RunConfig) -> int:
    fmatrix = load_fmatrix(config.f_source, config.precision_bits)
    l = config.options["l"]
    closed = gram_closed(l, fmatrix)
    if config.options.get("compare_bruteforce"):
        brute = gram_bruteforce(l, fmatrix)
        match = all(
            closed[a][b] == brute[a][b]
            for a in range(len(closed))
            for b in range(len(closed))
        )
        doc = {
            "l": l,
            "gram_closed": _grid_strings(closed),
            "gram_bruteforce": _grid_strings(brute),
            "match": bool(match),
        }
        _emit(config, _json_text(doc) + ("MATCH" if match else "MISMATCH"))
        return 0 if match else 1
    if config.output_format == "csv":
        _emit(config, _grid_csv(closed))
    else:
        _emit(config, _json_text({"l": l, "gram": _grid_strings(closed)}))
    return 0


def _cmd_weingarten(config: RunConfig) -> int:
    fmatrix = load_fmatrix(config.f_source, config.precision_bits)
    l = config.options["l"]
    table = weingarten(l, fmatrix, config.cache_dir)
    if config.output_format == "csv":
        _emit(config, _grid_csv(table.wg))
    else:
        doc = {
            "l": l,
            "order": [str(p) for p in table.order],
            "gram": _grid_strings(table.gram),
            "wg": _grid_strings(table.wg),
        }
        _emit(config, _json_text(doc))
    return 0


def _cmd_variances(config: RunConfig) -> int:
    fmatrix = load_fmatrix(config.f_source, config.precision_bits)
    grid = variance_matrix(fmatrix)
    if config.output_format == "csv":
        lines = ["i,j,left,right"]
        for i, row in enumerate(grid, start=1):
            for j, (left, right) in enumerate(row, start=1):
                lines.append(f"{i},{j},{format_scalar(left)},{format_scalar(right)}")
        _emit(config, "\n".join(lines) + "\n")
    else:
        doc = {
            "variances": [
                [[format_scalar(left), format_scalar(right)] for left, right in row]
                for row in grid
            ]
        }
        _emit(config, _json_text(doc))
    return 0


def _parse_family(text: str):
    if os.path.exists(text):
        with open(text) as handle:
            text = handle.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"family parse error at position {exc.pos}: {exc.msg}"
        ) from None
    if not isinstance(doc, list):
        raise ValueError("family must be a JSON list of variable specs")
    specs = []
    for item in doc:
        kind = item.get("kind", GENERALIZED_CIRCULAR)
        if kind not in (SEMICIRCULAR, GENERALIZED_CIRCULAR):
            raise ValueError(f"unknown kind {kind!r}")
        specs.append(
            GCSpec(
                str(item["label"]),
                kind,
                parse_rational(str(item.get("left_var", "1"))),
                parse_rational(str(item.get("right_var", item.get("left_var", "1")))),
            )
        )
    return specs


def _cmd_free_moment(config: RunConfig) -> int:
    family = _parse_family(config.options["family"])
    labels = tuple(config.options["r"].split(","))
    eps = _parse_eps(config.options["eps"]) if config.options.get("eps") else (
        (PLAIN,) * len(labels)
    )
    value = free_moment(family, labels, eps)
    _emit(config, format_scalar(value))
    return 0


def _cmd_fock_check(config: RunConfig) -> int:
    family = _parse_family(config.options["family"])
    labels = tuple(config.options["r"].split(","))
    eps = _parse_eps(config.options["eps"]) if config.options.get("eps") else (
        (PLAIN,) * len(labels)
    )
    cutoff = config.options["cutoff"]

    letter_pairs = {}
    next_letter = 1
    for spec in family:
        if spec.kind == SEMICIRCULAR:
            letter_pairs[spec.label] = (next_letter, next_letter)
            next_letter += 1
        else:
            letter_pairs[spec.label] = (next_letter, next_letter + 1)
            next_letter += 2
    space = TruncatedFock(max(next_letter - 1, 1), cutoff)
    by_label = {spec.label: spec for spec in family}
    operators = []
    for label, e in zip(labels, eps):
        spec = by_label[label]
        op = gc_from_spec(space, spec, *letter_pairs[label])
        operators.append(op.adjoint() if e == STAR else op)
    fock_value = vacuum_expectation(operators)
    free_value = free_moment(family, labels, eps)
    match = fock_value == free_value
    _emit(
        config,
        f"free={format_scalar(free_value)} fock={format_scalar(fock_value)} "
        + ("MATCH" if match else "MISMATCH"),
    )
    return 0 if match else 1


def _cmd_converge(config: RunConfig) -> int:
    family = config.options["family"]
    lengths = config.options["lengths"]
    positions = ((1, 1), (1, 2))
    words = standard_word_suite(positions, lengths)
    if family == "gamma":
        rows = convergence_table(
            "gamma",
            config.options["gammas"],
            words,
            k=config.options["k"],
            rho=config.options["rho"],
            cache_dir=config.cache_dir,
        )
    elif family == "large-rank":
        rows = convergence_table(
            "large-rank",
            config.options["ks"],
            words,
            lam=config.options["lam"],
            cache_dir=config.cache_dir,
            exact=config.mode == "exact",
            precision_bits=config.precision_bits,
        )
    else:
        raise ValueError(f"unknown family {family!r}")
    if config.output_format == "json":
        doc = [
            {
                "family": row.family,
                "param": row.param,
                "n_f": format_scalar(row.n_f),
                "word": row.word,
                "error": format_scalar(row.error),
                "scaled": format_scalar(row.scaled),
            }
            for row in rows
        ]
        _emit(config, _json_text(doc))
    else:
        _emit(config, rows_to_csv(rows))
    return 0


def _cmd_invariance(config: RunConfig) -> int:
    fmatrix = load_fmatrix(config.f_source, config.precision_bits)
    if config.options.get("suite"):
        reports = []
        for l in (2, 4):
            patterns = [
                tuple(PLAIN if r % 2 == 0 else STAR for r in range(l)),
                tuple(STAR if r % 2 == 0 else PLAIN for r in range(l)),
            ]
            for eps in patterns:
                for base in range(1, fmatrix.n + 1):
                    reports.append(
                        invariance_check(
                            fmatrix, l, eps, (base,) * l, cache_dir=config.cache_dir
                        )
                    )
        _emit(config, _json_text([r.to_json_dict() for r in reports]))
        return 0
    l = config.options["l"]
    eps = _parse_eps(config.options["eps"])
    i = _parse_indices(config.options["i"])
    w = None
    if config.options.get("w_i"):
        w = _parse_word(config.options, prefix="w_")
    report = invariance_check(fmatrix, l, eps, i, w, cache_dir=config.cache_dir)
    _emit(config, _json_text(report.to_json_dict()))
    return 0


def _cmd_weak_checks(config: RunConfig) -> int:
    fmatrix = load_fmatrix(config.f_source, config.precision_bits)
    i, j = config.options["i"], config.options["j"]
    unitarity = weak_unitarity_check(fmatrix, i, j, cache_dir=config.cache_dir)
    q_relation = weak_q_relation_check(fmatrix, i, j, cache_dir=config.cache_dir)
    doc = {
        "i": i,
        "j": j,
        "unitarity": format_scalar(unitarity),
        "q_relation": format_scalar(q_relation),
    }
    _emit(config, _json_text(doc))
    return 0


def _cmd_classify(config: RunConfig) -> int:
    fmatrix = load_fmatrix(config.f_source, config.precision_bits)
    result = classify_factor_type(fmatrix.q)
    _emit(config, result.label())
    return 0


_HANDLERS = {
    "moment": _cmd_moment,
    "star-moment": _cmd_moment,
    "gram": _cmd_gram,
    "weingarten": _cmd_weingarten,
    "variances": _cmd_variances,
    "free-moment": _cmd_free_moment,
    "fock-check": _cmd_fock_check,
    "converge": _cmd_converge,
    "invariance": _cmd_invariance,
    "weak-checks": _cmd_weak_checks,
    "classify": _cmd_classify,
}


def run(config: RunConfig) -> int:
    """Dispatch one configured invocation; 0 on success, 1 on domain error."""
    handler = _HANDLERS.get(config.subcommand)
    if handler is None:
        click.echo(f"error: unknown subcommand {config.subcommand!r}", err=True)
        return 2
    context = (
        mpmath.workprec(config.precision_bits)
        if config.mode == "float"
        else contextlib.nullcontext()
    )
    try:
        with context:
            return handler(config)
    except _DOMAIN_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


# -- click wiring --------------------------------------------------------------


def _common_options(func):
    decorators = [
        click.option("--out", "output_path", default=None, help="Write output to a file (atomic)."),
        click.option(
            "--format",
            "output_format",
            type=click.Choice(["json", "csv"]),
            default="json",
            show_default=True,
        ),
        click.option(
            "--cache-dir",
            default=None,
            help=f"Weingarten table cache directory (or ${CACHE_ENV_VAR}).",
        ),
        click.option("--mode", type=click.Choice(["exact", "float"]), default="exact"),
        click.option("--prec", "precision_bits", type=int, default=DEFAULT_PRECISION_BITS),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def _make_config(subcommand, f_source, output_path, output_format, cache_dir, mode, precision_bits, **options):
    return RunConfig(
        subcommand=subcommand,
        f_source=f_source,
        output_format=output_format,
        output_path=output_path,
        cache_dir=cache_dir or os.environ.get(CACHE_ENV_VAR),
        mode=mode,
        precision_bits=precision_bits,
        options=options,
    )


@click.group()
def main():
    """Exact Haar *-moment engine for deformed free orthogonal quantum groups."""


@main.command("moment")
@click.option("--f", "f_source", required=True, help="F spec: file path or inline JSON.")
@click.option("--i", required=True, help="Row indices, e.g. 1,1,2,2.")
@click.option("--j", required=True, help="Column indices.")
@click.option("--eps", default=None, help="Sign tokens '1'/'*'; default all plain.")
@_common_options
def moment_command(f_source, i, j, eps, output_path, output_format, cache_dir, mode, precision_bits):
    """Haar moment of a generator monomial."""
    config = _make_config(
        "moment", f_source, output_path, output_format, cache_dir, mode, precision_bits,
        i=i, j=j, eps=eps,
    )
    sys.exit(run(config))


@main.command("star-moment")
@click.option("--f", "f_source", required=True)
@click.option("--i", required=True)
@click.option("--j", required=True)
@click.option("--eps", required=True)
@_common_options
def star_moment_command(f_source, i, j, eps, output_path, output_format, cache_dir, mode, precision_bits):
    """Haar *-moment of a generator monomial (canonical/monomial F)."""
    config = _make_config(
        "star-moment", f_source, output_path, output_format, cache_dir, mode, precision_bits,
        i=i, j=j, eps=eps,
    )
    sys.exit(run(config))


@main.command("gram")
@click.option("--f", "f_source", required=True)
@click.option("--l", type=int, required=True)
@click.option("--compare-bruteforce", is_flag=True, default=False)
@_common_options
def gram_command(f_source, l, compare_bruteforce, output_path, output_format, cache_dir, mode, precision_bits):
    """Deformed Gram matrix; optionally checked against the brute-force oracle."""
    config = _make_config(
        "gram", f_source, output_path, output_format, cache_dir, mode, precision_bits,
        l=l, compare_bruteforce=compare_bruteforce,
    )
    sys.exit(run(config))


@main.command("weingarten")
@click.option("--f", "f_source", required=True)
@click.option("--l", type=int, required=True)
@_common_options
def weingarten_command(f_source, l, output_path, output_format, cache_dir, mode, precision_bits):
    """Gram matrix and its exact inverse, using the table cache."""
    config = _make_config(
        "weingarten", f_source, output_path, output_format, cache_dir, mode, precision_bits,
        l=l,
    )
    sys.exit(run(config))


@main.command("variances")
@click.option("--f", "f_source", required=True)
@_common_options
def variances_command(f_source, output_path, output_format, cache_dir, mode, precision_bits):
    """Left/right variance grid of the generators."""
    config = _make_config(
        "variances", f_source, output_path, output_format, cache_dir, mode, precision_bits,
    )
    sys.exit(run(config))


@main.command("free-moment")
@click.option("--family", required=True, help="JSON list of variable specs (file or inline).")
@click.option("--r", required=True, help="Comma-separated labels.")
@click.option("--eps", default=None)
@_common_options
def free_moment_command(family, r, eps, output_path, output_format, cache_dir, mode, precision_bits):
    """Joint *-moment of a free semicircular/generalized circular family."""
    config = _make_config(
        "free-moment", None, output_path, output_format, cache_dir, mode, precision_bits,
        family=family, r=r, eps=eps,
    )
    sys.exit(run(config))


@main.command("fock-check")
@click.option("--family", required=True)
@click.option("--r", required=True)
@click.option("--eps", default=None)
@click.option("--cutoff", type=int, default=3, show_default=True)
@_common_options
def fock_check_command(family, r, eps, cutoff, output_path, output_format, cache_dir, mode, precision_bits):
    """Compare a free moment against the truncated Fock-space oracle."""
    config = _make_config(
        "fock-check", None, output_path, output_format, cache_dir, mode, precision_bits,
        family=family, r=r, eps=eps, cutoff=cutoff,
    )
    sys.exit(run(config))


@main.command("converge")
@click.option("--family", type=click.Choice(["gamma", "large-rank"]), required=True)
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--rho", default="1/2", help="Comma-separated rho values (gamma family).")
@click.option("--gammas", default="1/2,1/4,1/8", help="Gamma sweep values.")
@click.option("--ks", default="1,2,3", help="k sweep values (large-rank family).")
@click.option("--lam", default="4", help="Common lambda (large-rank family).")
@click.option("--l", "lengths", default="4", help="Comma-separated word lengths.")
@_common_options
def converge_command(family, k, rho, gammas, ks, lam, lengths, output_path, output_format, cache_dir, mode, precision_bits):
    """Freeness-error convergence table over a deformation family sweep."""
    config = _make_config(
        "converge", None, output_path, output_format, cache_dir, mode, precision_bits,
        family=family,
        k=k,
        rho=tuple(parse_rational(x) for x in rho.split(",")),
        gammas=tuple(parse_rational(x) for x in gammas.split(",")),
        ks=tuple(int(x) for x in ks.split(",")),
        lam=parse_rational(lam),
        lengths=tuple(int(x) for x in lengths.split(",")),
    )
    sys.exit(run(config))


@main.command("invariance")
@click.option("--f", "f_source", required=True)
@click.option("--l", type=int, default=None)
@click.option("--eps", default=None)
@click.option("--i", default=None)
@click.option("--w-i", default=None, help="Optional test word row indices.")
@click.option("--w-j", default=None)
@click.option("--w-eps", default=None)
@click.option("--suite", is_flag=True, default=False, help="Run the standard check suite.")
@_common_options
def invariance_command(f_source, l, eps, i, w_i, w_j, w_eps, suite, output_path, output_format, cache_dir, mode, precision_bits):
    """Rotation-invariance report(s) for the canonical free family."""
    if not suite and (l is None or eps is None or i is None):
        raise click.UsageError("--l, --eps and --i are required unless --suite is set")
    config = _make_config(
        "invariance", f_source, output_path, output_format, cache_dir, mode, precision_bits,
        l=l, eps=eps, i=i, w_i=w_i, w_j=w_j, w_eps=w_eps, suite=suite,
    )
    sys.exit(run(config))


@main.command("weak-checks")
@click.option("--f", "f_source", required=True)
@click.option("--i", type=int, required=True)
@click.option("--j", type=int, required=True)
@_common_options
def weak_checks_command(f_source, i, j, output_path, output_format, cache_dir, mode, precision_bits):
    """Row unitarity and Q-twisted column relation, paired with the Haar state."""
    config = _make_config(
        "weak-checks", f_source, output_path, output_format, cache_dir, mode, precision_bits,
        i=i, j=j,
    )
    sys.exit(run(config))


@main.command("classify")
@click.option("--f", "f_source", required=True)
@_common_options
def classify_command(f_source, output_path, output_format, cache_dir, mode, precision_bits):
    """Factor type from the ratio group of the diagonal of Q."""
    config = _make_config(
        "classify", f_source, output_path, output_format, cache_dir, mode, precision_bits,
    )
    sys.exit(run(config))


if __name__ == "__main__":
    main()
