"""The pinned builtin group catalog and the conjecture survey.

The catalog covers abelian groups, class-2 and class-3 p-groups, nonnilpotent
metabelian split extensions, and one order-729 metabelian specimen whose
automorphicity scan is opt-in.  The survey walks a catalog slice (or a
directory of .tbl files), computes one row per group, and raises a flag on
any row violating the metabelian <=> automorphic biconditional in either
direction; flags come only from exhaustive scans.
"""

from __future__ import annotations

from pathlib import Path

from .core import GammaForgeError
from .groups import (
    AnyGroup,
    Group,
    construct,
    from_file,
    is_metabelian,
    is_two_engel,
    is_uniquely_2_divisible,
    nilpotency_class,
)
from .loops import check_gamma_axioms, is_automorphic, is_moufang
from .constructions import circ_loop
from .checks import AUTOMORPHIC_EXHAUSTIVE_LIMIT
from .report import SurveyRow

CATALOG_SPECS: tuple[str, ...] = (
    "cyclic:3", "cyclic:5", "cyclic:7", "cyclic:9", "cyclic:27",
    "dp:cyclic:3,cyclic:3",
    "dp:cyclic:3,cyclic:5",
    "dp:cyclic:3,cyclic:7",
    "dp:cyclic:5,cyclic:5",
    "dp:cyclic:3,cyclic:9",
    "dp:cyclic:3,cyclic:3,cyclic:3",
    "dp:cyclic:3,cyclic:27",
    "dp:cyclic:9,cyclic:9",
    "dp:cyclic:3,cyclic:3,cyclic:9",
    "sd:7:3:2", "sd:7:3:4", "sd:13:3:3", "sd:11:5:3", "sd:31:5:2",
    "heis:3", "heis:5",
    "wr:3",
    "ut:4:3",
)

# orders 3..155 cover every materialized entry except the order-729 specimen
CATALOG_DESK_LIMIT = 243


def catalog_groups(lo: int = 1, hi: int = CATALOG_DESK_LIMIT) -> list[AnyGroup]:
    """Builtin groups with lo <= order <= hi, in catalog order."""
    out = []
    for spec in CATALOG_SPECS:
        g = construct(spec)
        if lo <= g.order <= hi:
            out.append(g)
    return out


def survey_row(g: AnyGroup, seed: int = 0, force_exhaustive: bool = False) -> SurveyRow:
    """One survey row; loop columns are filled only for odd-order table groups."""
    row = SurveyRow(spec=g.source_spec or g.name, order=g.order)
    if not isinstance(g, Group):
        row.skipped = "functional group: loop construction needs a table"
        return row
    row.uniquely_2_divisible = is_uniquely_2_divisible(g)
    if not row.uniquely_2_divisible:
        row.skipped = "not uniquely 2-divisible"
        return row
    row.nilpotency_class = nilpotency_class(g)
    row.metabelian = is_metabelian(g)
    engel, ew = is_two_engel(g)
    row.two_engel = engel
    if ew is not None:
        row.witnesses["two-engel"] = f"({g.label(ew[0])},{g.label(ew[1])})"

    q = circ_loop(g)
    row.circ_is_loop = True  # validated at construction
    row.circ_gamma = check_gamma_axioms(q).all_hold
    assoc, aw = q.is_associative()
    row.circ_associative = assoc
    if aw is not None:
        row.witnesses["associativity"] = \
            f"({q.label(aw[0])},{q.label(aw[1])},{q.label(aw[2])})"
    moufang, mw = is_moufang(q)
    row.circ_moufang = moufang
    if mw is not None:
        row.witnesses["moufang"] = f"({q.label(mw[0])},{q.label(mw[1])},{q.label(mw[2])})"

    exhaustive = force_exhaustive or g.order < AUTOMORPHIC_EXHAUSTIVE_LIMIT
    # in exhaustive mode skip the random prescreen so the verdict (and any
    # flag raised from it) always comes from the deterministic full scan
    verdict = is_automorphic(q, exhaustive=exhaustive, probes=0 if exhaustive else 64,
                             seed=seed)
    if verdict.status == "true":
        row.circ_automorphic = "true"
    elif verdict.status == "false":
        row.circ_automorphic = "false"
        k = verdict.witness[0]
        args = ",".join(q.label(v) if v >= 0 else "-" for v in verdict.witness[1:])
        row.witnesses["automorphic"] = f"{k}({args})"
    else:
        row.circ_automorphic = "prescreen-pass (inconclusive)"

    if verdict.exhaustive:
        if row.metabelian and verdict.status == "false":
            row.flag = "CONJECTURE-COUNTEREXAMPLE"
        if not row.metabelian and verdict.status == "true":
            row.flag = "CONJECTURE-COUNTEREXAMPLE"
    return row


def run_survey(lo: int = 3, hi: int = 81, source_dir: str | Path | None = None,
               seed: int = 0, force_exhaustive: bool = False) -> tuple[list[SurveyRow], dict]:
    """Survey rows over the builtin slice or a directory of .tbl files."""
    rows: list[SurveyRow] = []
    if source_dir is None:
        subjects: list[tuple[str, AnyGroup | None, str | None]] = []
        for spec in CATALOG_SPECS:
            g = construct(spec)
            if lo <= g.order <= hi:
                subjects.append((spec, g, None))
    else:
        subjects = []
        for path in sorted(Path(source_dir).glob("*.tbl")):
            try:
                g = from_file(path)
                if lo <= g.order <= hi:
                    subjects.append((f"file:{path.name}", g, None))
            except GammaForgeError as exc:
                subjects.append((f"file:{path.name}", None, str(exc)))
    for spec, g, err in subjects:
        if g is None:
            rows.append(SurveyRow(spec=spec, order=0, skipped=f"unreadable: {err}"))
            continue
        row = survey_row(g, seed=seed, force_exhaustive=force_exhaustive)
        row.spec = spec
        rows.append(row)
    rows.sort(key=lambda r: (r.order, r.spec))
    flags = sum(1 for r in rows if r.flag)
    summary = {
        "rows": len(rows),
        "skipped": sum(1 for r in rows if r.skipped),
        "metabelian": sum(1 for r in rows if r.metabelian),
        "automorphic-true": sum(1 for r in rows if r.circ_automorphic == "true"),
        "counterexample-flags": flags,
    }
    return rows, summary
