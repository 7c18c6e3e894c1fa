"""Command-line front end.

Commands
--------
analyze   gamma_plus / gamma_minus of r as rational functions, plus zero reports
similar   decide similarity of U + r(x)phi and U + s(x)phi; witness on YES
times     the twisted product r x s
circle    the circle composition r o s = r + s - r x s
invert    the circle inverse of t
matrix    export truncated sections of U_r and K_r
oracle    compare SVD kernel dimensions against the closed-form orders

Rational functions are given as JSON objects ``{"num": [[re,im],...], "den":
[[re,im],...]}`` with coefficients ascending in degree, either inline or as a
path to a ``.json`` file.  Reports are JSON with sorted keys, so identical
jobs produce byte-identical output; ``--pretty`` indents and adds rendered
fractions.  ``--batch manifest.json`` runs a list of job objects (same field
names as the flags) concurrently and reports them in manifest order.

Exit codes: 0 success (a NO verdict is a successful decision), 1 failed
operation (circle inverse of a non-invertible element, oracle disagreement),
2 invalid input (pole inside the disc, phi identically zero, malformed JSON,
missing file), 3 boundary-ambiguous verdict, 4 truncated computation refused
as untrustworthy at the requested size.

Matrix exports: JSON holds ``n``, ``kind`` and per-matrix ``window`` metadata
next to the nested ``[[re,im], ...]`` rows; CSV files start with a comment
line ``# kind=... n=... window=...`` followed by a ``re0,im0,re1,im1,...``
header and one row-major data row per matrix row.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ToleranceConfig
from .errors import (
    BoundaryAmbiguous,
    IndeterminateKernel,
    NoCircleSolution,
    NotCircleInvertible,
    PhiZero,
    PoleInDisc,
    PoleOnCircle,
    ShiftSimError,
    TruncationUnsound,
)
from .hardy import all_zeros, gamma_minus_fn, gamma_plus, ord_at
from .operators import K_matrix_via_times, K_matrix_via_toeplitz, kernel_dim, \
    kernel_dim_formula, truncate_U_r
from .ratfun import RatFunc, sup_circle
from .staralg import build_phi_context, circle, circle_inverse, similar, times

_TOL_FIELDS = [f.name for f in dataclasses.fields(ToleranceConfig)]
_COMMANDS = ("analyze", "similar", "times", "circle", "invert", "matrix", "oracle")
_REQUIRED = {
    "analyze": ("phi", "r"),
    "similar": ("phi", "r", "s"),
    "times": ("phi", "r", "s"),
    "circle": ("phi", "r", "s"),
    "invert": ("phi", "t"),
    "matrix": ("phi", "r"),
    "oracle": ("phi", "r"),
}


@dataclass
class JobSpec:
    """One unit of work: a command plus its inputs and knobs."""

    command: str
    phi: object = None
    r: object = None
    s: object = None
    t: object = None
    n: int | None = None
    k: int | None = None
    w: list | None = None
    tol: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "json"
    pretty: bool = False
    kind: str = "both"
    method: str = "times"


# ---------------------------------------------------------------------------
# encoding helpers
# ---------------------------------------------------------------------------


def _enc(c) -> list[float]:
    c = complex(c)
    return [float(c.real), float(c.imag)]


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex values as [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", ""))
    return complex(v)


def _fmt_c(c: complex) -> str:
    if c.imag == 0.0:
        return f"{c.real:.6g}"
    if c.real == 0.0:
        return f"{c.imag:.6g}j"
    sign = "+" if c.imag >= 0 else "-"
    return f"({c.real:.6g}{sign}{abs(c.imag):.6g}j)"


def _poly_str(coeffs) -> str:
    terms = []
    for j, c in enumerate(np.atleast_1d(coeffs)):
        c = complex(c)
        if c == 0:
            continue
        cs = _fmt_c(c)
        if j == 0:
            terms.append(cs)
        else:
            zp = "z" if j == 1 else f"z^{j}"
            terms.append(zp if cs == "1" else f"{cs}*{zp}")
    return " + ".join(terms) if terms else "0"


def _pretty_ratfunc(f: RatFunc) -> str:
    num = _poly_str(f.num)
    if f.is_polynomial():
        return num
    return f"({num}) / ({_poly_str(f.den)})"


def _zero_row(zd) -> dict:
    return {
        "location": _enc(zd.location),
        "multiplicity": int(zd.multiplicity),
        "region": zd.region,
    }


def _load_ratfunc(value, tol: ToleranceConfig, label: str) -> RatFunc:
    """Accept a parsed JSON object, an inline JSON string, or a file path."""
    if value is None:
        raise ValueError(f"missing required input --{label}")
    obj = value
    if isinstance(value, str):
        text = value if value.lstrip().startswith("{") else Path(value).read_text()
        obj = json.loads(text)
    f = RatFunc.from_json_obj(obj, tol)
    return f.validate_in_ratd(tol)


def _resolve_tol(overrides: dict) -> ToleranceConfig:
    unknown = sorted(set(overrides) - set(_TOL_FIELDS))
    if unknown:
        raise ValueError(f"unknown tolerance fields: {unknown}")
    return ToleranceConfig(**{k: float(v) for k, v in overrides.items()})


# ---------------------------------------------------------------------------
# per-command reports
# ---------------------------------------------------------------------------


def _run_analyze(job: JobSpec, tol: ToleranceConfig) -> dict:
    ctx = build_phi_context(_load_ratfunc(job.phi, tol, "phi"), tol)
    r = _load_ratfunc(job.r, tol, "r")
    gp = ctx.gamma_plus(r)
    gm = ctx.gamma_minus(r)
    one = RatFunc.one()
    doc = {
        "command": "analyze",
        "gamma_plus": gp.to_json_obj(),
        "gamma_minus": gm.to_json_obj(),
        "zeros_one_minus_gamma_plus": [_zero_row(z) for z in all_zeros(one - gp, tol)],
        "phi_zeros": [
            {"location": _enc(ld.a), "order": int(ld.order)} for ld in ctx.zeros
        ],
        "local_depths": [],
        "tolerances": dataclasses.asdict(tol),
    }
    gm1 = one - gm
    for ld in ctx.zeros:
        o = ord_at(gm1, ld.a, ld.order, tol).ord
        doc["local_depths"].append(
            {
                "zero": _enc(ld.a),
                "order": int(ld.order),
                "ord_one_minus_gamma_minus": int(o),
                "depth": int(min(ld.order, o)),
            }
        )
    if job.pretty:
        doc["gamma_plus_pretty"] = _pretty_ratfunc(gp)
        doc["gamma_minus_pretty"] = _pretty_ratfunc(gm)
    return doc


def _run_similar(job: JobSpec, tol: ToleranceConfig) -> dict:
    ctx = build_phi_context(_load_ratfunc(job.phi, tol, "phi"), tol)
    r = _load_ratfunc(job.r, tol, "r")
    s = _load_ratfunc(job.s, tol, "s")
    rep = similar(ctx, r, s)
    cond_a = [dict(_zero_row(z), side="r") for z in rep.zeros_r]
    cond_a += [dict(_zero_row(z), side="s") for z in rep.zeros_s]
    cond_b = [
        {
            "zero": _enc(row.a),
            "order": int(row.order),
            "ord_r": int(row.ord_r),
            "ord_s": int(row.ord_s),
            "depth_r": int(row.d_r),
            "depth_s": int(row.d_s),
            "equal": row.d_r == row.d_s,
        }
        for row in rep.local_rows
    ]
    doc = {
        "command": "similar",
        "verdict": rep.verdict,
        "cond_a": cond_a,
        "cond_b": cond_b,
        "pairs": [[_enc(x), _enc(y)] for x, y in rep.pairs],
        "witness": rep.witness.to_json_obj() if rep.witness is not None else None,
        "residual": rep.residual,
        "reasons": list(rep.reasons),
        "tolerances": dataclasses.asdict(tol),
    }
    if job.pretty and rep.witness is not None:
        doc["witness_pretty"] = _pretty_ratfunc(rep.witness)
    if rep.verdict == "BOUNDARY_AMBIGUOUS":
        doc["_exit"] = 3
    return doc


def _run_product(job: JobSpec, tol: ToleranceConfig) -> dict:
    ctx = build_phi_context(_load_ratfunc(job.phi, tol, "phi"), tol)
    r = _load_ratfunc(job.r, tol, "r")
    s = _load_ratfunc(job.s, tol, "s")
    out = times(ctx, r, s) if job.command == "times" else circle(ctx, r, s)
    doc = {
        "command": job.command,
        "result": out.to_json_obj(),
        "tolerances": dataclasses.asdict(tol),
    }
    if job.pretty:
        doc["result_pretty"] = _pretty_ratfunc(out)
    return doc


def _run_invert(job: JobSpec, tol: ToleranceConfig) -> dict:
    ctx = build_phi_context(_load_ratfunc(job.phi, tol, "phi"), tol)
    t = _load_ratfunc(job.t, tol, "t")
    inv = circle_inverse(ctx, t)
    doc = {
        "command": "invert",
        "result": inv.to_json_obj(),
        "residual": float(sup_circle(circle(ctx, t, inv))),
        "tolerances": dataclasses.asdict(tol),
    }
    if job.pretty:
        doc["result_pretty"] = _pretty_ratfunc(inv)
    return doc


def _matrix_json(top) -> dict:
    mat = [[_enc(v) for v in row] for row in top.matrix]
    return {"n": int(top.n), "window": int(top.window), "matrix": mat}


def _write_matrix_csv(path: Path, top, kind: str) -> None:
    lines = [f"# kind={kind} n={top.n} window={top.window}"]
    lines.append(",".join(f"{p}{j}" for j in range(top.n) for p in ("re", "im")))
    for row in top.matrix:
        lines.append(",".join(f"{v:.17g}" for x in row for v in (x.real, x.imag)))
    path.write_text("\n".join(lines) + "\n")


def _run_matrix(job: JobSpec, tol: ToleranceConfig) -> dict:
    ctx = build_phi_context(_load_ratfunc(job.phi, tol, "phi"), tol)
    r = _load_ratfunc(job.r, tol, "r")
    n = int(job.n) if job.n else 64
    build_k = K_matrix_via_toeplitz if job.method == "toeplitz" else K_matrix_via_times
    sections = {}
    if job.kind in ("u", "both"):
        sections["u_r"] = truncate_U_r(ctx, r, n)
    if job.kind in ("k", "both"):
        sections["k_r"] = build_k(ctx, r, n)
    if not sections:
        raise ValueError(f"matrix kind must be 'u', 'k' or 'both', got {job.kind!r}")
    doc = {"command": "matrix", "n": n, "kind": job.kind, "method": job.method}
    if job.format == "csv":
        if not job.output:
            raise ValueError("--format csv needs --output to name the files")
        base = Path(job.output)
        if base.suffix == ".csv":
            base = base.with_suffix("")
        written = []
        for name, top in sections.items():
            p = base.parent / f"{base.name}.{name}.csv" if len(sections) > 1 else (
                base.with_suffix(".csv")
            )
            _write_matrix_csv(p, top, name)
            written.append(str(p))
        doc["written"] = written
        doc["windows"] = {name: int(top.window) for name, top in sections.items()}
    else:
        for name, top in sections.items():
            doc[name] = _matrix_json(top)
    return doc


def _dedup_points(points, tol: ToleranceConfig) -> list[complex]:
    kept: list[complex] = []
    for w in points:
        if all(abs(w - v) > tol.delta_match for v in kept):
            kept.append(w)
    return kept


def _run_oracle(job: JobSpec, tol: ToleranceConfig) -> dict:
    ctx = build_phi_context(_load_ratfunc(job.phi, tol, "phi"), tol)
    r = _load_ratfunc(job.r, tol, "r")
    n = int(job.n) if job.n else 96
    k_max = int(job.k) if job.k else 3
    one = RatFunc.one()
    extra = [_as_complex(v) for v in (job.w or [])]
    for w in extra:
        if abs(w) >= 1.0 - tol.delta_boundary:
            raise ValueError(f"oracle points must be interior, got |{w}| >= 1")
    def interior_zeros(f: RatFunc) -> list[complex]:
        # an identically-zero symbol vanishes everywhere; the candidate set
        # then comes from the other factor (phi's zeros / extra points)
        if f.is_zero():
            return []
        return [z.location for z in all_zeros(f, tol) if z.region == "interior"]

    fw = interior_zeros(one - ctx.gamma_plus(r))
    adj = [ld.a for ld in ctx.zeros]
    adj += interior_zeros(one - ctx.gamma_minus(r))
    rows = []
    for side, cands in (("forward", fw + extra), ("adjoint", adj + extra)):
        for w in _dedup_points(cands, tol):
            for k in range(1, k_max + 1):
                nu = kernel_dim(ctx, r, w, k, side=side, n=n, tol=tol)
                frm = kernel_dim_formula(ctx, r, w, k, side=side, tol=tol)
                rows.append(
                    {
                        "side": side,
                        "w": _enc(w),
                        "k": k,
                        "svd": int(nu),
                        "formula": int(frm),
                        "agree": nu == frm,
                    }
                )
    doc = {
        "command": "oracle",
        "n": n,
        "rows": rows,
        "all_agree": all(row["agree"] for row in rows),
        "tolerances": dataclasses.asdict(tol),
    }
    if not doc["all_agree"]:
        doc["_exit"] = 1
    return doc


# ---------------------------------------------------------------------------
# dispatch and error mapping
# ---------------------------------------------------------------------------

_RUNNERS = {
    "analyze": _run_analyze,
    "similar": _run_similar,
    "times": _run_product,
    "circle": _run_product,
    "invert": _run_invert,
    "matrix": _run_matrix,
    "oracle": _run_oracle,
}


def _error_doc(job: JobSpec, exc: Exception, code: int) -> dict:
    doc = {
        "command": job.command,
        "error": str(exc),
        "error_type": type(exc).__name__,
        "exit": code,
    }
    poles = getattr(exc, "poles", None)
    if poles is not None:
        doc["poles"] = [_enc(p) for p in poles]
    return doc


def run(job: JobSpec) -> tuple[int, dict]:
    """Execute one job, mapping exceptions onto the exit-code contract."""
    try:
        if job.command not in _RUNNERS:
            raise ValueError(f"unknown command {job.command!r}")
        for name in _REQUIRED[job.command]:
            if getattr(job, name) is None:
                raise ValueError(f"missing required input --{name}")
        tol = _resolve_tol(job.tol)
        doc = _RUNNERS[job.command](job, tol)
        return int(doc.pop("_exit", 0)), doc
    except (PoleInDisc, PoleOnCircle, PhiZero) as exc:
        return 2, _error_doc(job, exc, 2)
    except BoundaryAmbiguous as exc:
        return 3, _error_doc(job, exc, 3)
    except (TruncationUnsound, IndeterminateKernel) as exc:
        return 4, _error_doc(job, exc, 4)
    except (NotCircleInvertible, NoCircleSolution) as exc:
        return 1, _error_doc(job, exc, 1)
    except (ValueError, KeyError, OSError, json.JSONDecodeError, TypeError) as exc:
        return 2, _error_doc(job, exc, 2)
    except ShiftSimError as exc:
        return 1, _error_doc(job, exc, 1)


def _emit(doc: dict, output: str | None, fmt: str, pretty: bool) -> None:
    if fmt == "text":
        payload = _text_render(doc)
    elif pretty:
        payload = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        payload = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    if output:
        Path(output).write_text(payload)
    else:
        sys.stdout.write(payload)


def _text_render(doc: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_text_render(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                lines.append(
                    "  " * (indent + 1)
                    + json.dumps(item, sort_keys=True, separators=(",", ":"))
                )
        else:
            lines.append(f"{pad}{key}: {json.dumps(val, sort_keys=True)}")
    return "\n".join(lines) + ("\n" if indent == 0 else "")


# ---------------------------------------------------------------------------
# batch mode
# ---------------------------------------------------------------------------

_JOB_FIELDS = {f.name for f in dataclasses.fields(JobSpec)}


def _jobspec_from_dict(entry: dict, base_tol: dict, pretty: bool) -> JobSpec:
    if not isinstance(entry, dict) or "command" not in entry:
        raise ValueError("each batch job must be an object with a 'command'")
    unknown = sorted(set(entry) - _JOB_FIELDS)
    if unknown:
        raise ValueError(f"unknown job fields: {unknown}")
    merged_tol = dict(base_tol)
    merged_tol.update(entry.get("tol", {}))
    kw = {k: v for k, v in entry.items() if k not in ("tol", "pretty")}
    return JobSpec(**kw, tol=merged_tol, pretty=bool(entry.get("pretty", pretty)))


def _run_batch(path: str, base_tol: dict, pretty: bool) -> tuple[int, dict]:
    manifest = json.loads(Path(path).read_text())
    raw = manifest.get("jobs") if isinstance(manifest, dict) else manifest
    if not isinstance(raw, list):
        raise ValueError("batch manifest must be a list of jobs or {'jobs': [...]}")
    jobs: list[JobSpec | None] = []
    results: list[tuple[int, dict] | None] = [None] * len(raw)
    for i, entry in enumerate(raw):
        try:
            jobs.append(_jobspec_from_dict(entry, base_tol, pretty))
        except (ValueError, TypeError) as exc:
            jobs.append(None)
            results[i] = (2, {"command": None, "error": str(exc), "exit": 2})
    # Jobs share no mutable state, so they can run side by side.
    live = [(i, j) for i, j in enumerate(jobs) if j is not None]
    if live:
        workers = min(8, len(live))
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            out = pool.map(run, [j for _, j in live])
            for (i, job), res in zip(live, out):
                results[i] = res
                if job.output:
                    _emit(res[1], job.output, job.format, job.pretty)
    codes = [c for c, _ in results]
    doc = {
        "command": "batch",
        "jobs": [d for _, d in results],
        "exit_codes": codes,
    }
    return max(codes, default=0), doc


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # allow_abbrev=False keeps the root parser from prefix-matching tokens
    # that belong to a subcommand (e.g. invert's --t vs the --tol-* family).
    parser = argparse.ArgumentParser(
        prog="shiftsim",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        allow_abbrev=False,
    )
    parser.add_argument(
        "--batch",
        metavar="MANIFEST",
        help="run the JSON list of jobs in MANIFEST; exit with the worst job code",
    )
    parser.add_argument("--pretty", action="store_true", help="indent JSON and render fractions")
    parser.add_argument("--output", help="write the report here instead of stdout")
    parser.add_argument(
        "--format", choices=("json", "csv", "text"), default="json", dest="fmt"
    )
    for name in _TOL_FIELDS:
        parser.add_argument(
            f"--tol-{name.replace('_', '-')}",
            type=float,
            default=None,
            dest=f"tol_{name}",
            metavar="X",
            help=f"override ToleranceConfig.{name}",
        )
    subs = parser.add_subparsers(dest="command")
    want = {
        "analyze": ("phi", "r"),
        "similar": ("phi", "r", "s"),
        "times": ("phi", "r", "s"),
        "circle": ("phi", "r", "s"),
        "invert": ("phi", "t"),
        "matrix": ("phi", "r"),
        "oracle": ("phi", "r"),
    }
    help_for = {
        "analyze": "zero/order report for one perturbation",
        "similar": "similarity verdict, conditions, witness",
        "times": "twisted product r x s",
        "circle": "circle composition r o s",
        "invert": "circle inverse of t",
        "matrix": "truncated U_r / K_r export",
        "oracle": "SVD kernel dims vs closed-form orders",
    }
    for cmd in _COMMANDS:
        sp = subs.add_parser(cmd, help=help_for[cmd], allow_abbrev=False)
        for inp in want[cmd]:
            sp.add_argument(
                f"--{inp}",
                required=True,
                help=f"rational function JSON (inline or file path) for {inp}",
            )
        if cmd == "matrix":
            sp.add_argument("--n", type=int, default=64, help="section size (default 64)")
            sp.add_argument("--kind", choices=("u", "k", "both"), default="both")
            sp.add_argument("--method", choices=("times", "toeplitz"), default="times")
        if cmd == "oracle":
            sp.add_argument("--n", type=int, default=96, help="section size (default 96)")
            sp.add_argument("--k", type=int, default=3, help="largest power tested")
            sp.add_argument(
                "--w",
                action="append",
                default=None,
                help="extra interior point, e.g. '0.3+0.1j' (repeatable)",
            )
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    tol_overrides = {
        name: getattr(ns, f"tol_{name}")
        for name in _TOL_FIELDS
        if getattr(ns, f"tol_{name}") is not None
    }
    if ns.batch:
        try:
            code, doc = _run_batch(ns.batch, tol_overrides, ns.pretty)
        except (ValueError, OSError, json.JSONDecodeError) as exc:
            code, doc = 2, {"command": "batch", "error": str(exc), "exit": 2}
        _emit(doc, ns.output, "json", ns.pretty)
        return code
    if not ns.command:
        build_parser().error("a command or --batch is required")
    job = JobSpec(
        command=ns.command,
        phi=getattr(ns, "phi", None),
        r=getattr(ns, "r", None),
        s=getattr(ns, "s", None),
        t=getattr(ns, "t", None),
        n=getattr(ns, "n", None),
        k=getattr(ns, "k", None),
        w=getattr(ns, "w", None),
        tol=tol_overrides,
        output=ns.output,
        format=ns.fmt,
        pretty=ns.pretty,
        kind=getattr(ns, "kind", "both"),
        method=getattr(ns, "method", "times"),
    )
    code, doc = run(job)
    if job.command == "matrix" and job.format == "csv":
        _emit(doc, None, "json", job.pretty)
    else:
        _emit(doc, job.output, job.format, job.pretty)
    return code


if __name__ == "__main__":
    sys.exit(main())
