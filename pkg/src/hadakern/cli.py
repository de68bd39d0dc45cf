"""``hadakern`` command line.

Every subcommand prints line-delimited JSON (or a key/value table with
``--format table``).  Exit codes: 0 success, 1 property violation (the
witness is included in the output), 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import generators as gen
from .errors import (
    ArithmeticDomainError,
    ConditionsViolated,
    EntriesNotUnimodular,
    HadakernError,
    InvalidCoefficients,
    InvalidGenerator,
    InvalidIndexSet,
    InvalidOrder,
    NotApplicable,
    NotBlockConstant,
    NotThreePmp,
    ParseError,
    RefinementHypothesisFailed,
    ShapeError,
    SymmetryError,
    UnsupportedDomainError,
    UnsupportedGroup,
    VerificationFailed,
)
from .groups import GroupSpec
from .kernels import (
    ker_block_ones,
    positive_combination_kernel,
    rectangular_simultaneous_kernel,
    simultaneous_kernel,
    stratification_partition,
    distinct_diagonal_check,
    verify_t3pmp,
)
from .matrix import HermitianMatrix, Matrix, identity, ones, signature, subspace_equal
from .pmp import check_pmp_signature, first_pmp_violation, is_k_pmp, is_k_psrp, pmp_order
from .scalars import DEFAULT_TOLERANCE, PrimeField, domain_from_name
from .serialization import load_matrix, matrix_from_json, matrix_to_json
from .strata import (
    hns_decompose,
    is_block_orbit_constant,
    pi_min,
    pi_stratum,
    rank_one_certificates,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID = 0, 1, 2

INVALID_INPUT = (
    ParseError, SymmetryError, ShapeError, UnsupportedDomainError, UnsupportedGroup,
    InvalidGenerator, InvalidOrder, InvalidCoefficients, InvalidIndexSet, ArithmeticDomainError,
    EntriesNotUnimodular,
)
VIOLATIONS = (
    NotThreePmp, VerificationFailed, ConditionsViolated, NotBlockConstant,
    RefinementHypothesisFailed, NotApplicable,
)


class Violation(Exception):
    """A subcommand found its property false; ``payload`` is printed before exiting 1."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("error", "property violation"))
        self.payload = payload


# -- input -------------------------------------------------------------------------

_NAMED = re.compile(r"^(?P<name>[a-z0-9\-]+?)(?::(?P<arg>\d+))?$")


def named_matrix(source: str) -> Matrix | None:
    """Built-in matrices: named examples, ``identity[:N]``, ``ones:N``, ``T<N>`` / ``toeplitz:N``."""
    m = re.fullmatch(r"T(\d+)", source)
    if m:
        return gen.gen_toeplitz_tridiag(int(m.group(1)))
    m = _NAMED.match(source)
    if not m:
        return None
    name, arg = m.group("name"), m.group("arg")
    n = int(arg) if arg else None
    if name in gen.NAMED_EXAMPLES:
        return gen.gen_named_example(name, n) if name == "pow2-psd" else gen.gen_named_example(name)
    if name == "identity":
        return identity(n or 3)
    if name == "ones":
        return HermitianMatrix._trusted(ones(n or 3))
    if name == "toeplitz" and n:
        return gen.gen_toeplitz_tridiag(n)
    return None


def read_matrix(args, hermitian: bool | None = True) -> Matrix:
    src = args.matrix
    if src != "-" and not Path(src).exists():
        A = named_matrix(src)
        if A is None:
            raise ParseError(f"no such file or built-in matrix: {src!r}")
        if args.domain:
            A = matrix_from_json(matrix_to_json(A), tolerance=args.tolerance, domain=args.domain, hermitian=hermitian)
        return A
    return load_matrix(src, domain=args.domain, tolerance=args.tolerance, hermitian=hermitian)


def group_of(args) -> GroupSpec:
    return GroupSpec.parse(args.group)


# -- reports -----------------------------------------------------------------------


def _one_based(idx):
    return None if idx is None else [i + 1 for i in idx]


def pmp_profile(A: Matrix) -> dict:
    order, witness = first_pmp_violation(A)
    return {"pmp_order": order, "first_violation": _one_based(witness)}


def analyze_report(A: Matrix, G: GroupSpec) -> dict:
    n = A.nrows
    report = {"n": n, "domain": matrix_to_json(A)["domain"], "group": str(G)}
    report.update(pmp_profile(A))
    report["signature"] = signature(A).to_json()
    report["pi_min"] = pi_min(A, G).to_json()
    report["stratification_partition"] = stratification_partition(A).to_json()
    report["simultaneous_kernel"] = simultaneous_kernel(A).to_json()
    three = report["pmp_order"] >= min(3, n)
    battery = {"three_pmp": three}
    if three:
        p = pi_stratum(A, G)
        report["pi_stratum"] = p.to_json()
        report["stratum_report"] = rank_one_certificates(A, p, G).to_json()
        battery["stratum"] = "applicable"
    else:
        battery["stratum"] = "inapplicable: not 3-PMP"
    try:
        report["hns"] = hns_decompose(A).to_json()
        battery["hns"] = "applicable"
    except EntriesNotUnimodular:
        battery["hns"] = "inapplicable: entries not of modulus 0 or 1"
    except NotThreePmp as exc:
        battery["hns"] = f"inapplicable: not 3-PMP, witness {_one_based(exc.witness)}"
    battery["t3pmp"] = "applicable" if three else "inapplicable: not 3-PMP"
    report["checks"] = battery
    return report


def _check(name, status, **detail) -> dict:
    return {"check": name, "status": status, **detail}


def _is_unimodular_pattern(A: Matrix) -> bool:
    dom = A.domain
    scale = A.scale()
    return all(dom.eq(dom.abs2(x), 0, scale) or dom.eq(dom.abs2(x), 1, scale) for r in A.rows for x in r)


def battery(A: Matrix, G: GroupSpec) -> list[dict]:
    """Run every structural check whose hypotheses ``A`` meets.

    Status is ``pass``, ``fail``, ``skip`` (hypothesis not met) or
    ``expected-failure`` (a conclusion that is known not to extend to this
    input indeed fails).
    """
    out = []
    n = A.nrows
    order = pmp_order(A)
    three = order >= min(3, n)
    sig = signature(A)
    psd = sig.n_minus == 0

    if psd:
        out.append(_check("pmp_signature", "skip", reason="positive semidefinite"))
    else:
        rep = check_pmp_signature(A)
        out.append(_check("pmp_signature", "pass" if rep.consistent else "fail", **rep.to_json()))

    if order >= 2:
        v = is_k_psrp(A, order - 1)
        out.append(_check("psrp", "pass" if v.holds else "fail", k=order - 1, witness=_one_based(v.witness)))
    else:
        out.append(_check("psrp", "skip", reason=f"pmp_order {order} < 2"))

    pm = pi_min(A, G)
    fine = stratification_partition(A)
    ok = is_block_orbit_constant(A, pm, G) and fine.is_refinement_of(pm)
    out.append(_check("pi_min", "pass" if ok else "fail", partition=pm.to_json()))

    t3 = verify_t3pmp(A)
    dim_ok = t3.spaces["powers_lt_N"].dim == n - t3.partition.m
    if three:
        good = t3.all_equal and dim_ok
        out.append(_check("t3pmp", "pass" if good else "fail", partition=t3.partition.to_json(),
                          equal=[list(r) for r in t3.equal]))
    else:
        status = "expected-failure" if not t3.all_equal else "skip"
        out.append(_check("t3pmp", status, reason="not 3-PMP", equal=[list(r) for r in t3.equal]))

    if three and A.domain.exact:
        try:
            p = pi_stratum(A, G)
            rep = rank_one_certificates(A, p, G)
            good = rep.reconstruct() == A and rep.disc_ok is not False and rep.open_disc_ok is not False
            out.append(_check("stratum", "pass" if good else "fail", partition=p.to_json()))
        except (VerificationFailed, ConditionsViolated) as exc:
            out.append(_check("stratum", "fail", error=str(exc)))
    else:
        out.append(_check("stratum", "skip", reason="not 3-PMP" if not three else "inexact domain"))

    if _is_unimodular_pattern(A):
        try:
            dec = hns_decompose(A)
            good = dec.conjugate(A) == dec.canonical_form() and psd
            out.append(_check("hns", "pass" if good else "fail", **dec.to_json()))
        except NotThreePmp as exc:
            status = "skip" if not three else "fail"
            out.append(_check("hns", status, reason="not 3-PMP", witness=_one_based(exc.witness)))
        except VerificationFailed as exc:
            out.append(_check("hns", "fail", error=str(exc)))
    else:
        out.append(_check("hns", "skip", reason="entries not of modulus 0 or 1"))

    try:
        hyp, _ = distinct_diagonal_check(A)
        out.append(_check("distinct_diagonal", "pass" if hyp else "skip"))
    except VerificationFailed as exc:
        out.append(_check("distinct_diagonal", "fail", error=str(exc)))

    if psd:
        K = positive_combination_kernel(A, [1] * n)
        good = subspace_equal(K, t3.spaces["powers_lt_N"])
        out.append(_check("combination", "pass" if good else "fail"))
    else:
        out.append(_check("combination", "skip", reason="not positive semidefinite"))
    return out


# -- corpus --------------------------------------------------------------------------

CORPUS_FAMILIES = ("random-psd", "signature", "random-hns", "inflated-psd", "hermitian")


def corpus_matrix(seed: int) -> tuple[str, Matrix]:
    """Deterministic matrix for a corpus seed; the family cycles with the seed."""
    import random

    family = CORPUS_FAMILIES[seed % len(CORPUS_FAMILIES)]
    rng = random.Random(seed)
    if family == "random-psd":
        n = rng.randint(1, 6)
        return family, gen.gen_random_psd(n, rng.randint(1, n), seed)
    if family == "signature":
        n = rng.randint(2, 6)
        k = rng.randint(0, n - 1)
        n_plus = rng.randint(k, n - 1)
        return family, gen.gen_signature_example(n, k, n_plus, rng.randint(1, n - n_plus))[0]
    if family == "random-hns":
        return family, gen.gen_random_unimodular_hns(rng.randint(1, 7), seed)
    if family == "inflated-psd":
        n = rng.randint(2, 7)
        m = rng.randint(1, n)
        C = gen.gen_random_psd(m, rng.randint(1, m), seed, bound=3)
        return family, gen.gen_block_inflation(C, gen.random_partition(rng, n, m))
    return family, gen.corpus_hermitian(1, seed, nmax=5)[0]


def _verify_seed(task) -> dict:
    seed, group_text = task
    family, A = corpus_matrix(seed)
    checks = battery(A, GroupSpec.parse(group_text))
    failed = [c for c in checks if c["status"] == "fail"]
    line = {"seed": seed, "family": family, "n": A.nrows, "ok": not failed, "checks": checks}
    if failed:
        line["matrix"] = matrix_to_json(A)
    return line


def parse_seed_range(text: str) -> range:
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text.strip())
    if not m:
        raise ParseError(f"corpus range must look like A..B, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if b < a:
        raise ParseError("empty corpus range")
    return range(a, b + 1)


# -- subcommands -----------------------------------------------------------------------


def cmd_analyze(args):
    A = read_matrix(args)
    yield analyze_report(A, group_of(args))


def cmd_pmp(args):
    A = read_matrix(args)
    if args.k is not None:
        v = is_k_pmp(A, args.k)
        payload = {"k": args.k, "holds": v.holds, "witness": _one_based(v.witness)}
        if not v.holds:
            raise Violation(payload)
        yield payload
    else:
        yield pmp_profile(A)


def cmd_psrp(args):
    A = read_matrix(args)
    v = is_k_psrp(A, args.k)
    payload = {"k": args.k, "holds": v.holds, "witness": _one_based(v.witness)}
    if not v.holds:
        raise Violation(payload)
    yield payload


def cmd_signature(args):
    A = read_matrix(args)
    out = {"signature": signature(A).to_json(), "pmp_order": pmp_order(A)}
    try:
        rep = check_pmp_signature(A)
        out["bound_holds"] = rep.consistent
        if not rep.consistent:
            raise Violation(out)
    except NotApplicable:
        out["bound_holds"] = None
    yield out


def cmd_partition(args):
    A = read_matrix(args)
    G = group_of(args)
    if args.stratum:
        p = pi_stratum(A, G)
        yield {"group": str(G), "partition": p.to_json(), "report": rank_one_certificates(A, p, G).to_json()}
    else:
        yield {"group": str(G), "partition": pi_min(A, G).to_json()}


def cmd_kernel(args):
    if args.block_ones:
        A = read_matrix(args)
        p = stratification_partition(A)
        yield {"partition": p.to_json(), "kernel": ker_block_ones(p, A.domain).to_json()}
        return
    if args.combination:
        A = read_matrix(args)
        coeffs = [c.strip() for c in args.combination.split(",") if c.strip()]
        dom = A.domain
        yield {"coefficients": coeffs, "kernel": positive_combination_kernel(A, [_parse_scalar(c, dom) for c in coeffs]).to_json()}
        return
    A = read_matrix(args, hermitian=None)
    out = {"kernel": simultaneous_kernel(A).to_json()} if A.is_square else {}
    if not A.is_square or isinstance(A.domain, PrimeField):
        if A.domain.exact:
            rk = rectangular_simultaneous_kernel(A)
            out["column_partition"] = rk.column_partition.to_json()
            out["kernel"] = rk.kernel.to_json()
            out["partition_formula_exact"] = rk.partition_formula_exact
    yield out


def _parse_scalar(text, dom):
    from .scalars import parse_gaussian

    try:
        return dom.coerce(parse_gaussian(text) if dom.exact else complex(text.replace("i", "j")))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidCoefficients(f"bad coefficient {text!r}") from exc


def cmd_hns(args):
    A = read_matrix(args)
    try:
        yield hns_decompose(A).to_json()
    except NotThreePmp as exc:
        raise Violation({"error": str(exc), "witness": _one_based(exc.witness)}) from exc


def cmd_verify(args):
    G = group_of(args)
    target = args.target
    if target and target[0] == "t3pmp":
        args.matrix = target[1] if len(target) > 1 else None
        if args.matrix is None:
            raise ParseError("verify t3pmp needs a matrix")
        A = read_matrix(args)
        rep = verify_t3pmp(A)
        payload = rep.to_json()
        if rep.is_three_pmp and not rep.all_equal:
            raise Violation({**payload, "matrix": matrix_to_json(A)})
        payload["status"] = "pass" if rep.all_equal else "expected-failure"
        yield payload
        return
    if args.corpus:
        tasks = [(s, str(G)) for s in parse_seed_range(args.corpus)]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                lines = list(pool.map(_verify_seed, tasks, chunksize=8))
        else:
            lines = [_verify_seed(t) for t in tasks]
        bad = [ln for ln in lines if not ln["ok"]]
        for ln in lines:
            yield ln
        summary = {"summary": True, "total": len(lines), "failed": len(bad), "ok": not bad}
        if bad:
            raise Violation(summary)
        yield summary
        return
    if not target:
        raise ParseError("verify needs a matrix or --corpus A..B")
    args.matrix = target[0]
    A = read_matrix(args)
    checks = battery(A, G)
    for c in checks:
        yield c
    failed = [c for c in checks if c["status"] == "fail"]
    summary = {"summary": True, "ok": not failed, "failed": [c["check"] for c in failed]}
    if failed:
        raise Violation({**summary, "matrix": matrix_to_json(A)})
    yield summary


GENERATORS = {
    "lambda-shift": ("n", "lam"),
    "vandermonde": ("l", "m", "u"),
    "psrp-gap": ("n", "l", "k"),
    "signature": ("n", "k", "n_plus", "n_minus"),
    "toeplitz": ("n",),
    "named": ("name", "n"),
    "random-psd": ("n", "r", "domain"),
    "random-hns": ("n",),
}


def parse_params(text: str | None) -> dict:
    out = {}
    for part in (text or "").split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ParseError(f"parameter {part!r} is not key=value")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _int(params, key, default=None):
    if key not in params:
        if default is None:
            raise InvalidGenerator(f"missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except ValueError as exc:
        raise InvalidGenerator(f"parameter {key!r} must be an integer") from exc


def cmd_generate(args):
    params = parse_params(args.params)
    family = args.family
    if family not in GENERATORS:
        raise InvalidGenerator(f"unknown family {family!r}; choose from {sorted(GENERATORS)}")
    unknown = set(params) - set(GENERATORS[family])
    if unknown:
        raise InvalidGenerator(f"unknown parameters {sorted(unknown)} for {family}")
    extra = {}
    if family == "lambda-shift":
        n, lam = _int(params, "n"), params.get("lam", "1")
        A = gen.gen_lambda_shift(n, lam)
        cert = gen.certify_lambda_shift(A, n, lam)
    elif family == "vandermonde":
        l, m = _int(params, "l"), _int(params, "m")
        u = params["u"].split(";") if "u" in params else None
        A = gen.gen_vandermonde_psd(l, m, u)
        cert = gen.certify_vandermonde_psd(A, m)
    elif family == "psrp-gap":
        n, l, k = _int(params, "n"), _int(params, "l"), _int(params, "k")
        A, eps = gen.gen_psrp_gap(n, l, k)
        cert, extra = gen.certify_psrp_gap(A, n, l, k), {"eps": str(eps)}
    elif family == "signature":
        n, k = _int(params, "n"), _int(params, "k")
        n_plus, n_minus = _int(params, "n_plus"), _int(params, "n_minus")
        A, eps = gen.gen_signature_example(n, k, n_plus, n_minus)
        cert, extra = gen.certify_signature_example(A, n, k, n_plus, n_minus), {"eps": str(eps)}
    elif family == "toeplitz":
        A = gen.gen_toeplitz_tridiag(_int(params, "n"))
        cert = gen.certify_toeplitz(A)
    elif family == "named":
        name = params.get("name", "example5x5")
        A = gen.gen_named_example(name, _int(params, "n", 3))
        cert = {}
    elif family == "random-psd":
        n = _int(params, "n")
        dom = domain_from_name(params.get("domain", "gaussian-rational"))
        A = gen.gen_random_psd(n, _int(params, "r", n), args.seed, dom)
        cert = {"psd": signature(A).n_minus == 0}
    else:
        A = gen.gen_random_unimodular_hns(_int(params, "n"), args.seed)
        dec = hns_decompose(A)
        cert = {"round_trip": dec.conjugate(A) == dec.canonical_form()}
    payload = {"family": family, "matrix": matrix_to_json(A), "certificate": cert, **extra}
    if not all(cert.values()):
        raise Violation(payload)
    yield payload


# -- plumbing ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", default=None, help="rational | gaussian-rational | gf:<p> | float")
    common.add_argument("--group", default="trivial", help="trivial | roots:<k> | circle | nonzero | cyclic:<g>")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="hadakern", description="Hadamard-power kernels and PMP strata.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, matrix=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if matrix:
            p.add_argument("matrix", help="JSON/CSV file, '-' for stdin, or a built-in name")
        p.set_defaults(func=fn)
        return p

    add("analyze", cmd_analyze, "full report for one matrix")
    p = add("pmp", cmd_pmp, "principal minor positivity")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--k", type=int)
    g.add_argument("--order", action="store_true")
    p = add("psrp", cmd_psrp, "principal submatrix rank property")
    p.add_argument("--k", type=int, required=True)
    add("signature", cmd_signature, "inertia and the PMP signature bound")
    p = add("partition", cmd_partition, "coarsest orbit-constant partition")
    p.add_argument("--stratum", action="store_true", help="rank-one stratum partition with certificates")
    p = add("kernel", cmd_kernel, "simultaneous kernels")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--simultaneous", action="store_true")
    g.add_argument("--block-ones", action="store_true")
    g.add_argument("--combination", default=None, help="comma-separated positive coefficients c0,c1,...")
    add("hns", cmd_hns, "unitary-monomial block decomposition")
    p = add("verify", cmd_verify, "structural check battery", matrix=False)
    p.add_argument("target", nargs="*", help="MATRIX or 't3pmp MATRIX'")
    p.add_argument("--corpus", default=None, help="seed range A..B")
    p.add_argument("--jobs", type=int, default=1)
    p = add("generate", cmd_generate, "emit a constructed matrix with its certificate", matrix=False)
    p.add_argument("family", help=", ".join(GENERATORS))
    p.add_argument("--params", default=None, help="key=value,...")
    return parser


def _render(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj)
    return "\n".join(f"{k:<26} {json.dumps(v)}" for k, v in obj.items()) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    stream = open(args.out, "w") if args.out else sys.stdout
    code = EXIT_OK
    try:
        for obj in args.func(args):
            print(_render(obj, args.format), file=stream)
    except Violation as v:
        print(_render(v.payload, args.format), file=stream)
        code = EXIT_VIOLATION
    except INVALID_INPUT as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        code = EXIT_INVALID
    except VIOLATIONS as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "witness", None) is not None:
            payload["witness"] = _one_based(exc.witness)
        print(_render(payload, args.format), file=stream)
        code = EXIT_VIOLATION
    except (HadakernError, ValueError, TypeError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        code = EXIT_INVALID
    finally:
        if stream is not sys.stdout:
            stream.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
