"""Command-line front end: JSON job files in, JSON result documents out.

All integers in job files are decimal strings (rationals as "num/den").
Exit codes: 0 determinate success, 1 input error, 2 indeterminate outcome.
A persistent class-group cache, keyed by discriminant, lives in a single
JSON file guarded by an exclusive lock.
"""

from __future__ import annotations

import argparse
import fcntl
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .building import ApartmentFrame, LatticeClass, chamber_vertices, type_distance
from .classgroup import ClassGroup, QuadForm, class_group, prime_class
from .dvr import LocalMatrix
from .genus import DeviationData, choose_generators, genus_group, parametrization, rho
from .relext import OrderSpec, QuadInt, RelativeExtension, splitting_shape
from .selectivity import (
    INDETERMINATE,
    AlgebraSpec,
    admits_order,
    selectivity_verdict,
)

DEFAULT_CACHE = os.path.join(
    os.path.expanduser("~"), ".cache", "selorders", "classgroups.json"
)


class JobError(ValueError):
    pass


def _int(x):
    try:
        return int(str(x))
    except ValueError as exc:
        raise JobError(f"not an integer: {x!r}") from exc


def _matrix(rows, prime):
    try:
        return LocalMatrix([[Fraction(str(x)) for x in row] for row in rows], prime)
    except (ValueError, ZeroDivisionError) as exc:
        raise JobError(f"bad matrix: {exc}") from exc


def _prime_of_k(spec, d):
    ell = _int(spec["ell"])
    which = _int(spec.get("which", 0))
    return prime_class(ell, d, which)


def _form_doc(f: QuadForm):
    return [str(f.a), str(f.b), str(f.c)]


def _matrix_doc(m: LocalMatrix):
    return [[str(x) for x in row] for row in m.entries]


# ---------------------------------------------------------------------------
# cache


def cache_path():
    return os.environ.get("SELORDERS_CACHE", DEFAULT_CACHE)


def _cached_class_group(d: int, use_cache: bool) -> ClassGroup:
    if not use_cache:
        return ClassGroup(d)
    path = cache_path()
    os.makedirs(os.path.dirname(path), exist_ok=True)
    lock_path = path + ".lock"
    with open(lock_path, "w") as lock:
        fcntl.flock(lock, fcntl.LOCK_EX)
        try:
            data = {}
            if os.path.exists(path):
                try:
                    with open(path) as fh:
                        data = json.load(fh)
                except (json.JSONDecodeError, OSError):
                    data = {}  # corruption: rebuild, never wrong answers
            key = str(d)
            entry = data.get(key)
            if entry is not None and _cache_entry_valid(entry, d):
                return class_group(d)  # entry validated; recompute is cheap and exact
            group = ClassGroup(d)
            data[key] = {
                "h": group.h,
                "structure": list(group.structure),
                "forms": [[f.a, f.b, f.c] for f in group.elements],
            }
            tmp = path + ".tmp"
            with open(tmp, "w") as fh:
                json.dump(data, fh, sort_keys=True)
            os.replace(tmp, path)
            return group
        finally:
            fcntl.flock(lock, fcntl.LOCK_UN)


def _cache_entry_valid(entry, d: int) -> bool:
    try:
        forms = entry["forms"]
        return all(b * b - 4 * a * c == d for a, b, c in forms) and \
            entry["h"] == len(forms)
    except (KeyError, TypeError, ValueError):
        return False


# ---------------------------------------------------------------------------
# subcommands


def run_td(job, args):
    prime = _int(job["prime"])
    l1 = LatticeClass(_matrix(job["basis1"], prime))
    l2 = LatticeClass(_matrix(job["basis2"], prime))
    return {"type_distance": type_distance(l1, l2)}


def run_chamber(job, args):
    prime = _int(job["prime"])
    frame = ApartmentFrame(_matrix(job["frame"], prime))
    vertices = chamber_vertices(frame)
    return {
        "vertices": [_matrix_doc(v.canonical) for v in vertices],
        "pairwise_td": [
            [type_distance(a, b) for b in vertices] for a in vertices
        ],
    }


def run_classgroup(job, args):
    d = _int(job["d"])
    group = _cached_class_group(d, use_cache=not args.no_cache)
    return {
        "h": group.h,
        "structure": list(group.structure),
        "forms": [_form_doc(f) for f in group.elements],
    }


def _extension(job):
    d = _int(job["d"])
    p = _int(job["p"])
    coeffs = tuple(
        QuadInt(Fraction(str(u)), Fraction(str(v)), d) for u, v in job["g"]
    )
    return RelativeExtension(d, p, coeffs)


def run_split(job, args):
    ext = _extension(job)
    nu = _prime_of_k(job["nu"], ext.d)
    shape = splitting_shape(nu, ext)
    return {
        "kind_in_K": nu.kind,
        "degrees": list(shape.degrees),
        "repeated": shape.repeated,
    }


def _deviation(doc, d, p):
    local = {}
    for item in doc:
        nu = _prime_of_k(item, d)
        local[nu] = LatticeClass(_matrix(item["basis"], nu.ell))
    return DeviationData(local)


def run_rho(job, args):
    d = _int(job["d"])
    p = _int(job["p"])
    ram = frozenset(_prime_of_k(s, d) for s in job.get("ram", []))
    g = genus_group(d, p, ram)
    dev1 = _deviation(job.get("dev1", []), d, p)
    dev2 = _deviation(job.get("dev2", []), d, p)
    value = rho(dev1, dev2, g)
    return {
        "genus_order": g.order,
        "rank": g.m,
        "rho": _form_doc(value.rep),
        "trivial": value == g.identity,
    }


def run_parametrize(job, args):
    d = _int(job["d"])
    p = _int(job["p"])
    ram = frozenset(_prime_of_k(s, d) for s in job.get("ram", []))
    g = genus_group(d, p, ram)
    gens = choose_generators(g, bound=args.bound)
    frames = {nu: ApartmentFrame.standard(p, nu.ell) for nu in gens}
    out = {
        "rank": g.m,
        "generators": [{"ell": gen.ell, "which": gen.which} for gen in gens],
        "deviations": [],
    }
    gammas = job.get("gammas")
    if gammas is None:
        gammas = _all_gammas(p, g.m)
    empty = DeviationData()
    for gamma in gammas:
        gamma = tuple(_int(x) for x in gamma)
        dev = parametrization(g, gens, frames, gamma)
        out["deviations"].append(
            {
                "gamma": list(gamma),
                "rho": _form_doc(rho(empty, dev, g).rep),
                "local": [
                    {
                        "ell": nu.ell,
                        "which": nu.which,
                        "basis": _matrix_doc(lat.canonical),
                    }
                    for nu, lat in sorted(
                        dev.local.items(), key=lambda kv: (kv[0].ell, kv[0].which)
                    )
                ],
            }
        )
    return out


def _all_gammas(p, m):
    gammas = [()]
    for _ in range(m):
        gammas = [g + (k,) for g in gammas for k in range(p)]
    return gammas


def run_verdict(job, args):
    ext = _extension(job)
    d, p = ext.d, ext.p
    ram = frozenset(_prime_of_k(s, d) for s in job.get("ram", []))
    algebra = AlgebraSpec(d, p, ram)
    order_doc = job["order"]
    family = order_doc["family"]
    if family == "multiplier":
        order = OrderSpec("multiplier", _prime_of_k(order_doc, d))
    else:
        order = OrderSpec("monogenic")
    if not args.no_cache:
        _cached_class_group(d, use_cache=True)
    verdict = selectivity_verdict(
        algebra, order, ext, bound=args.bound, stabilization=args.stabilization
    )
    out = {
        "embeds": verdict.embeds,
        "cond1": verdict.cond1,
        "cond2": verdict.cond2,
        "selective": verdict.selective,
        "fraction": None if verdict.fraction is None else str(verdict.fraction),
        "reasons": verdict.reasons,
    }
    if verdict.hl is not None:
        out["cond1_mode"] = verdict.hl.mode
        out["genus_order"] = verdict.hl.genus.order
        out["genus_rank"] = verdict.hl.genus.m
        if args.certificates:
            out["certificates"] = [
                {
                    "ell": s.ell,
                    "which": s.which,
                    "degrees": list(s.degrees),
                    "repeated": s.repeated,
                    "coset": None if s.coset_rep is None else _form_doc(s.coset_rep),
                }
                for s in verdict.hl.samples
            ]
    if verdict.determinate and verdict.selective:
        g = verdict.genus
        gens = choose_generators(
            g, h_l=verdict.hl.member_forms(), bound=args.bound
        )
        frames = {nu: ApartmentFrame.standard(p, nu.ell) for nu in gens}
        empty = DeviationData()
        admissible = []
        for gamma in _all_gammas(p, g.m):
            dev = parametrization(g, gens, frames, gamma)
            admissible.append(
                {"gamma": list(gamma), "admits": admits_order(verdict, dev)}
            )
        out["parametrization"] = {
            "generators": [{"ell": x.ell, "which": x.which} for x in gens],
            "classes": admissible,
        }
    return out


HANDLERS = {
    "td": run_td,
    "chamber": run_chamber,
    "classgroup": run_classgroup,
    "split": run_split,
    "rho": run_rho,
    "parametrize": run_parametrize,
    "verdict": run_verdict,
}


def _is_indeterminate(outcome) -> bool:
    if outcome is INDETERMINATE:
        return True
    if isinstance(outcome, dict):
        return any(_is_indeterminate(v) for v in outcome.values())
    if isinstance(outcome, list):
        return any(_is_indeterminate(v) for v in outcome)
    return outcome == INDETERMINATE


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="selorders",
        description="Selective orders in degree-p^2 central simple algebras",
    )
    parser.add_argument("subcommand", choices=sorted(HANDLERS))
    parser.add_argument("input", help="path to a JSON job file, or - for stdin")
    parser.add_argument("--bound", type=int, default=2000,
                        help="sampling bound (number of rational primes)")
    parser.add_argument("--stabilization", type=int, default=200,
                        help="consecutive stable samples needed to accept")
    parser.add_argument("--no-cache", action="store_true",
                        help="bypass the class-group cache")
    parser.add_argument("--certificates", action="store_true",
                        help="include the full sampling trace")
    args = parser.parse_args(argv)

    start = time.monotonic()
    try:
        if args.input == "-":
            job = json.load(sys.stdin)
        else:
            with open(args.input) as fh:
                job = json.load(fh)
        outcome = HANDLERS[args.subcommand](job, args)
    except (JobError, KeyError, ValueError, TypeError, OSError,
            json.JSONDecodeError) as exc:
        doc = {"error": f"{type(exc).__name__}: {exc}", "version": __version__}
        print(json.dumps(doc, sort_keys=True))
        return 1
    doc = {
        "job": job,
        "outcome": outcome,
        "timing": round(time.monotonic() - start, 6),
        "version": __version__,
    }
    print(json.dumps(doc, sort_keys=True))
    return 2 if _is_indeterminate(outcome) else 0


if __name__ == "__main__":
    sys.exit(main())
