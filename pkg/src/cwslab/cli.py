"""``cwslab`` command line: analyze, schedule, recover and verify code specs.

Reports go to stdout as JSON with sorted keys; a short summary goes to
stderr unless ``--quiet``. Exit status is 0 on success, 1 when a check or
recovery fails, and 2 for invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

import numpy as np

from . import __version__, kernels
from ._config import AMP_TOL, GRAM_TOL, OP_TOL, dense_budget
from .exceptions import BudgetExceededError, CwsLabError, InvalidCodeError, UncorrectableError
from .graphs import (
    canonical_key,
    cl_map,
    corrects,
    degeneracy_classes,
    distance,
    errors_on,
    errors_up_to,
    graph_generators,
    is_additive,
    standard_form_from_stabilizer,
)
from .measurement import And, Leaf, Xor, detection_expr, eval_dense, positive_projector
from .pauli import PauliOperator, bits_from_mask, mask_from_bits
from .recovery import (
    additive_operators,
    additive_schedule,
    beyond_t_schedule,
    count_B,
    count_N,
    generic_classes,
    histogram,
    run_trials,
    structured_schedule,
)
from .specfile import CodeSpec, load_spec
from .stabilizer import (
    ErrorGroup,
    StabilizerGroup,
    build_aux_ust,
    conjugated_sign_matrix,
    subgroup_without,
)
from .statevec import (
    apply_pauli,
    code_subspace,
    graph_state,
    subspace_relation,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _tolerances() -> dict:
    return {"amplitude": AMP_TOL, "operator": OP_TOL, "gram": GRAM_TOL, "dense_budget": dense_budget()}


def _code_summary(spec: CodeSpec, d: int | None) -> dict:
    code = spec.code
    return {
        "name": spec.name,
        "n": code.n,
        "K": code.K,
        "distance": d,
        "additive": is_additive(code),
        "edges": [list(e) for e in code.graph.edges],
        "codewords": code.classical.strings(),
    }


def _report(command: dict, spec: CodeSpec, d: int | None, result: dict, ok: bool) -> dict:
    return {
        "version": __version__,
        "command": command,
        "code": _code_summary(spec, d),
        "result": result,
        "ok": ok,
        "tolerances": _tolerances(),
    }


def _default_t(spec: CodeSpec, d: int, given: int | None) -> int:
    if given is not None:
        return given
    if spec.declared_t is not None:
        return spec.declared_t
    return max(0, (d - 1) // 2)


def _index_sets(spec: CodeSpec, flags: list[str] | None):
    if not flags:
        return None
    if flags == ["declared"]:
        if spec.index_sets is None:
            raise InvalidCodeError("spec declares no index_sets")
        return [list(s) for s in spec.index_sets]
    out = []
    for f in flags:
        try:
            out.append([int(q) for q in f.split(",") if q.strip()])
        except ValueError:
            raise InvalidCodeError(f"--index-set expects comma-separated qubits, got {f!r}") from None
    return out


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(args) -> tuple[dict, int, str]:
    spec = load_spec(args.spec)
    code = spec.code
    d = distance(code)
    t = _default_t(spec, d, args.t)
    errs = errors_up_to(code.n, t)
    part = degeneracy_classes(code, errs)
    n = code.n
    classes = {bits_from_mask(b, n): [str(e) for e in es] for b, es in part.classes.items()}
    merged = [str(e) for e in part.classes.get(0, ()) if not e.is_identity]
    pure = all(len(es) == 1 for es in part.classes.values())
    cr = corrects(code, errs)
    result = {
        "t": t,
        "errors_checked": len(errs),
        "class_count": len(part.classes),
        "degeneracy_classes": classes,
        "pure": pure,
        "degenerate_zero_class": merged,
        "degenerate_zero_flag": bool(merged),
        "corrects_weight_t": bool(cr),
        "correction_witness": [str(e) for e in cr.witness] if cr.witness else None,
        "counts": {"B": count_B(n, t), "N": count_N(n, t)},
    }
    summary = f"{spec.name}: n={n} K={code.K} d={d} additive={is_additive(code)} classes(t={t})={len(part.classes)}"
    return _report({"name": "analyze", "spec": args.spec, "t": t}, spec, d, result, True), EXIT_OK, summary


# ---------------------------------------------------------------------------
# schedule


def _build_schedule(spec: CodeSpec, mode: str, t: int, s_max: int | None, sets):
    code = spec.code
    if mode == "structured":
        return structured_schedule(code, t, sets)
    if mode == "additive":
        return additive_schedule(code, t=t)
    if mode == "beyond-t":
        return beyond_t_schedule(code, t, s_max if s_max is not None else t + 1, index_sets=sets)
    raise InvalidCodeError(f"unknown mode {mode!r}")


def cmd_schedule(args) -> tuple[dict, int, str]:
    spec = load_spec(args.spec)
    code = spec.code
    d = distance(code)
    t = _default_t(spec, d, args.t)
    sets = _index_sets(spec, args.index_set)
    if args.mode == "generic":
        classes = generic_classes(code, t)
        result = {
            "mode": "generic",
            "t": t,
            "phases": [
                {"label": f"class/{bits_from_mask(b, code.n)}", "purpose": "generic_class_test",
                 "representative": str(rep)}
                for b, rep in classes
            ],
            "worst_case": len(classes),
            "counts": {"B": count_B(code.n, t), "N": count_N(code.n, t), "reduction": [count_B(code.n, t), count_N(code.n, t)]},
        }
        worst = len(classes)
    else:
        sch = _build_schedule(spec, args.mode, t, args.s_max, sets)
        result = sch.as_dict()
        if args.mode == "additive":
            result["operators"] = [str(p) for p in additive_operators(sch)]
        worst = sch.worst_case
    summary = f"{spec.name}: mode={args.mode} t={t} worst-case measurements={worst} N={count_N(code.n, t)}"
    cmd = {"name": "schedule", "spec": args.spec, "t": t, "mode": args.mode, "s_max": args.s_max,
           "index_sets": sets}
    return _report(cmd, spec, d, result, True), EXIT_OK, summary


# ---------------------------------------------------------------------------
# recover


def _injections(spec: CodeSpec, inject: str, trials: int, pool) -> list:
    if inject == "random":
        return [None] * trials
    if inject == "all":
        return list(pool)
    return [PauliOperator.from_string(inject, spec.n)] * trials


def cmd_recover(args) -> tuple[dict, int, str]:
    spec = load_spec(args.spec)
    code = spec.code
    d = distance(code)
    t = _default_t(spec, d, args.t)
    sets = _index_sets(spec, args.index_set)
    n = code.n
    if args.mode == "generic":
        schedule = None
        pool = errors_up_to(n, t)
        bound = len(generic_classes(code, t))
    else:
        schedule = _build_schedule(spec, args.mode, t, args.s_max, sets)
        pool = schedule.error_set()
        bound = count_N(n, t) if args.mode != "beyond-t" else schedule.worst_case
    injections = _injections(spec, args.inject, args.trials, pool)
    results = run_trials(code, schedule, injections, seed=args.seed, jobs=args.jobs,
                         generic_t=t if args.mode == "generic" else None)
    trials = []
    for k, r in enumerate(results):
        row = {
            "trial": k,
            "injected": str(r.injected),
            "expected_class": bits_from_mask(r.expected_class, n),
            "success": r.success,
        }
        if r.outcome is not None:
            row.update({
                "identified_class": bits_from_mask(r.outcome.identified_class, n),
                "measurements": r.outcome.measurements_used,
                "correction": str(r.outcome.correction),
                "transcript": [line.as_dict() for line in r.outcome.transcript],
            })
        else:
            row["error"] = r.error
        trials.append(row)
    succ = sum(r.success for r in results)
    counts = [r.outcome.measurements_used for r in results if r.outcome is not None]
    max_used = max(counts, default=0)
    ok = succ == len(results) and max_used <= bound
    result = {
        "mode": args.mode,
        "t": t,
        "trials": trials,
        "successes": succ,
        "trial_count": len(results),
        "success_rate": succ / len(results) if results else 1.0,
        "histogram": {str(k): v for k, v in histogram(results).items()},
        "max_measurements": max_used,
        "bound": bound,
        "seed_rule": "numpy SeedSequence(seed).spawn(trials), one child per trial in order",
    }
    summary = f"{spec.name}: {succ}/{len(results)} recovered, max measurements {max_used} (bound {bound})"
    cmd = {"name": "recover", "spec": args.spec, "t": t, "mode": args.mode, "inject": args.inject,
           "trials": args.trials, "seed": args.seed, "index_sets": sets}
    return _report(cmd, spec, d, result, ok), (EXIT_OK if ok else EXIT_FAIL), summary


# ---------------------------------------------------------------------------
# verify


class _Checks:
    def __init__(self):
        self.rows: list[dict] = []

    def add(self, name: str, passed: bool, **detail):
        self.rows.append({"name": name, "passed": bool(passed), **detail})

    @property
    def ok(self) -> bool:
        return all(r["passed"] for r in self.rows)


def _sign_string(v: np.ndarray) -> str:
    return "".join("+" if x > 0 else "-" for x in v)


def _correctable_error_set(spec: CodeSpec, t: int):
    code = spec.code
    if spec.index_sets is not None:
        seen = {}
        for s in spec.index_sets:
            for e in errors_on(code.n, s):
                seen.setdefault((e.z, e.x), e)
        errs = sorted(seen.values(), key=canonical_key)
    else:
        errs = errors_up_to(code.n, t)
    return errs if corrects(code, errs) else None


def _random_commuting_set(n: int, size: int, rng) -> list[PauliOperator]:
    ops: list[PauliOperator] = []
    while len(ops) < size:
        z, x = int(rng.integers(1 << n)), int(rng.integers(1 << n))
        p = PauliOperator(n, z, x, 0)
        p = p if p.is_hermitian else PauliOperator(n, z, x, 1)
        if (z or x) and all(p.commutes(q) for q in ops) and not any(p.equiv(q) for q in ops):
            ops.append(-p if rng.integers(2) else p)
    return ops


def cmd_verify(args) -> tuple[dict, int, str]:
    spec = load_spec(args.spec)
    code = spec.code
    n = code.n
    exp = spec.expected
    chk = _Checks()
    d = distance(code)
    t = _default_t(spec, d, None)

    # graph state and images
    s = graph_state(code.graph)
    res = max(float(np.max(np.abs(apply_pauli(g, s).amplitudes - s.amplitudes))) for g in graph_generators(code.graph))
    chk.add("graph_state_stabilized", res <= AMP_TOL, residual=res)
    if "graph_state_signs" in exp:
        scale = np.sqrt(1 << n)
        # expected string is over |0..0> .. |1..1> with qubit 1 leftmost
        order = [mask_from_bits(format(i, f"0{n}b")) for i in range(1 << n)]
        amps = s.amplitudes[order] * scale
        want = np.array([1.0 if c == "+" else -1.0 for c in exp["graph_state_signs"]])
        dev = float(np.max(np.abs(amps - want)))
        chk.add("graph_state_signs", dev <= OP_TOL, got=_sign_string(amps.real), want=exp["graph_state_signs"], residual=dev)
    if "images" in exp:
        got = {k: bits_from_mask(cl_map(code.graph, PauliOperator.from_string(k, n)), n) for k in exp["images"]}
        chk.add("graph_images", got == exp["images"], got=got)
    for key, val in (("K", code.K), ("distance", d), ("additive", is_additive(code))):
        if key in exp:
            chk.add(f"expected_{key}", exp[key] == val, got=val, want=exp[key])

    space = code_subspace(code)
    chk.add("code_basis_orthonormal", space.gram_defect() <= AMP_TOL, residual=space.gram_defect())
    mq = detection_expr(build_aux_ust(code, ErrorGroup([], n)))
    proj = positive_projector(mq)
    dev = float(np.max(np.abs(proj - space.projector())))
    chk.add("code_projector_matches_basis", dev <= AMP_TOL, residual=dev)

    if spec.stabilizer_generators:
        sf = standard_form_from_stabilizer(spec.stabilizer_generators, spec.logical_x, spec.logical_z)
        same = sf.graph == code.graph and set(sf.codewords) == set(code.codewords)
        chk.add("standard_form", same, codewords=sf.classical.strings())
        stab = StabilizerGroup(spec.stabilizer_generators)
        from .statevec import stabilizer_code_basis

        rel = subspace_relation(stabilizer_code_basis(stab.generators, n), space)
        chk.add("standard_form_same_space", rel.kind == "identical", relation=rel.kind)

    # corrupted-space trichotomy on the correctable set
    errs = _correctable_error_set(spec, t)
    if errs is None:
        chk.add("corrupted_space_trichotomy", False, reason="declared error set is not correctable")
    else:
        part = degeneracy_classes(code, errs)
        spaces = {b: space.apply_pauli(part.representative(b)) for b in part.classes}
        worst = 0.0
        bad = []
        for b1, b2 in combinations(spaces, 2):
            rel = subspace_relation(spaces[b1], spaces[b2])
            worst = max(worst, max(rel.singular_values))
            if rel.kind != "orthogonal":
                bad.append([bits_from_mask(b1, n), bits_from_mask(b2, n)])
        same_bad = []
        for b, es in part.classes.items():
            for e in es[1:]:
                if subspace_relation(spaces[b], space.apply_pauli(e)).kind != "identical":
                    same_bad.append(str(e))
        chk.add("corrupted_space_trichotomy", not bad and not same_bad, classes=len(spaces),
                max_cross_overlap=worst, failing_pairs=bad, same_class_mismatch=same_bad)
        # outside the correctable set overlaps are only reported
        extra = [e for e in errors_up_to(n, 1) if (e.z, e.x) not in {(f.z, f.x) for f in errs}]
        overlaps = []
        for e1, e2 in combinations(extra, 2):
            rel = subspace_relation(space.apply_pauli(e1), space.apply_pauli(e2))
            if rel.kind == "overlapping":
                overlaps.append([str(e1), str(e2)])
        chk.add("overlaps_outside_correctable_set", True, informational=True, count=len(overlaps),
                examples=overlaps[:5])

    # auxiliary USt codes of the schedule
    try:
        sch = structured_schedule(code, t, [list(x) for x in spec.index_sets] if spec.index_sets else None)
    except InvalidCodeError as exc:
        sch = None
        chk.add("aux_codes", True, informational=True, skipped=str(exc))
    if sch is not None:
        worst = 0.0
        for blk in sch.blocks:
            group = ErrorGroup.from_images(n, blk.generators)
            aux = build_aux_ust(code, group)
            sub = code_subspace(aux)
            p = positive_projector(detection_expr(aux))
            worst = max(worst, sub.gram_defect(), float(np.max(np.abs(p - sub.projector()))))
        chk.add("aux_ust_orthogonality", worst <= 1e-8, residual=worst, blocks=len(sch.blocks))
        if "aux_dimension" in exp:
            blk = sch.blocks[0]
            aux = build_aux_ust(code, ErrorGroup.from_images(n, blk.generators))
            chk.add("aux_dimension", aux.dimension == exp["aux_dimension"], got=aux.dimension)
            sm = conjugated_sign_matrix(aux)
            if "aux_base_generators" in exp:
                got = [str(g) for g in aux.base_stabilizer.generators]
                chk.add("aux_base_generators", got == exp["aux_base_generators"], got=got)
            if "sign_matrix" in exp:
                chk.add("sign_matrix", sm.pretty() == exp["sign_matrix"], got=sm.pretty())
            for l, (g, row) in exp.get("subgroup_rows", {}).items():
                sub_aux = build_aux_ust(code, subgroup_without(ErrorGroup.from_images(n, blk.generators), int(l)))
                srow = conjugated_sign_matrix(sub_aux).row(PauliOperator.from_string(g))
                chk.add(f"subgroup_row_{l}", _sign_string(np.array(srow)) == row, got=_sign_string(np.array(srow)))
        if "recovered_classes" in exp:
            inj = [PauliOperator.from_string(k, n) for k in exp["recovered_classes"]]
            res = run_trials(code, sch, inj, seed=0)
            got = {k: bits_from_mask(r.outcome.identified_class, n) if r.outcome else None
                   for k, r in zip(exp["recovered_classes"], res)}
            chk.add("recovered_classes", got == exp["recovered_classes"] and all(r.success for r in res), got=got)

    if "additive_operators" in exp and is_additive(code):
        got = [str(p) for p in additive_operators(additive_schedule(code, t=t))]
        chk.add("additive_operators", got == exp["additive_operators"], got=got)
    if "additive_operators_from_representatives" in exp and spec.error_representatives:
        group = ErrorGroup(spec.error_representatives)
        got = [str(p) for p in additive_operators(additive_schedule(code, group, t=t))]
        chk.add("additive_operators_from_representatives",
                got == exp["additive_operators_from_representatives"], got=got)

    # operator-algebra identities on random commuting sets
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(20):
        m = min(n, 4)
        ops = _random_commuting_set(m, int(rng.integers(1, m + 1)), rng)
        mats = [p.to_matrix() for p in ops]
        prod = np.eye(1 << m, dtype=complex)
        pprod = np.eye(1 << m, dtype=complex)
        for a in mats:
            prod = prod @ a
            pprod = pprod @ (0.5 * (np.eye(1 << m) + a))
        sign = (-1) ** (len(ops) - 1)
        worst = max(worst,
                    float(np.max(np.abs(eval_dense(Xor(tuple(Leaf(p) for p in ops))) - sign * prod))),
                    float(np.max(np.abs(eval_dense(And(tuple(Leaf(p) for p in ops))) - (2 * pprod - np.eye(1 << m))))))
    chk.add("operator_algebra", worst <= OP_TOL, residual=worst)

    passed = sum(r["passed"] for r in chk.rows)
    result = {"checks": chk.rows, "passed": passed, "total": len(chk.rows), "t": t}
    summary = f"{spec.name}: {passed}/{len(chk.rows)} checks passed"
    rep = _report({"name": "verify", "spec": args.spec}, spec, d, result, chk.ok)
    return rep, (EXIT_OK if chk.ok else EXIT_FAIL), summary


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="suppress the summary on stderr")
    p = argparse.ArgumentParser(prog="cwslab", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"cwslab {__version__} ({kernels.BACKEND} kernels)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="distance, additivity and degeneracy classes")
    a.add_argument("spec", help="spec JSON path or bundled fixture name")
    a.add_argument("--t", type=int, default=None)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("schedule", parents=[common], help="build a recovery schedule")
    s.add_argument("spec")
    s.add_argument("--t", type=int, default=None)
    s.add_argument("--mode", choices=["structured", "generic", "additive", "beyond-t"], default="structured")
    s.add_argument("--s-max", type=int, default=None)
    s.add_argument("--index-set", action="append", default=None,
                   help="comma-separated qubits (repeatable) or 'declared' for the spec's index_sets")
    s.set_defaults(func=cmd_schedule)

    r = sub.add_parser("recover", parents=[common], help="simulate error injection and recovery")
    r.add_argument("spec")
    r.add_argument("--t", type=int, default=None)
    r.add_argument("--mode", choices=["structured", "generic", "additive", "beyond-t"], default="structured")
    r.add_argument("--s-max", type=int, default=None)
    r.add_argument("--trials", type=int, default=1)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--inject", default="random", help="'random', 'all', or a Pauli string such as XIIII or X2")
    r.add_argument("--index-set", action="append", default=None)
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=cmd_recover)

    v = sub.add_parser("verify", parents=[common], help="run the invariant suite for a spec")
    v.add_argument("spec")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    quiet = getattr(args, "quiet", False)
    try:
        report, code, summary = args.func(args)
    except (UncorrectableError, BudgetExceededError) as exc:
        print(f"cwslab: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (CwsLabError, ValueError) as exc:
        print(f"cwslab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    if not quiet:
        print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
