"""Regenerate fixtures/brugada/.

The published study reports only aggregates, so the records here are
synthetic. They are built so that the aggregates come out exactly:

* 300 MEDLINE records, 286 of which carry "Brugada Syndrome" and a 2010 or
  2011 publication date; 235 of those 286 carry a WoS accession number.
* February 2012 export: 114 cited papers, 435 citations.
* June 2012 export: 126 cited papers, 608 citations, no paper losing
  citations between the two dates.
* 292 category attributions over the 235 papers, with the 24 category
  counts of the published table (186 in the core cardiology category).

Run from the repository root: ``python scripts/make_brugada_fixture.py``.
"""

from __future__ import annotations

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures" / "brugada"

CORE = "Cardiac Cardiovascular Systems"
WC_COUNTS = [
    (CORE, 186),
    ("Medicine General Internal", 24),
    ("Engineering Biomedical", 10),
    ("Peripheral Vascular Disease", 10),
    ("Hematology", 8),
    ("Physiology", 8),
    ("Emergency Medicine", 7),
    ("Clinical Neurology", 4),
    ("Critical Care Medicine", 4),
    ("Pharmacology Pharmacy", 4),
    ("Anesthesiology", 3),
    ("Pediatrics", 3),
    ("Public Environmental Occupational Health", 3),
    ("Sport Sciences", 3),
    ("Biochemical Research Methods", 2),
    ("Cell Biology", 2),
    ("Chemistry Analytical", 2),
    ("Genetics Heredity", 2),
    ("Surgery", 2),
    ("Biology", 1),
    ("Medicine Legal", 1),
    ("Neurosciences", 1),
    ("Nursing", 1),
    ("Obstetrics Gynecology", 1),
]
OCCUPATIONAL_TRIPLE = [
    "Public Environmental Occupational Health",
    "Medicine General Internal",
    "Sport Sciences",
]

GROUPS = {
    "cardio": [CORE, "Peripheral Vascular Disease", "Hematology", "Critical Care Medicine",
               "Emergency Medicine", "Anesthesiology", "Surgery"],
    "clinical": ["Medicine General Internal", "Pediatrics", "Obstetrics Gynecology", "Nursing",
                 "Public Environmental Occupational Health", "Sport Sciences", "Medicine Legal",
                 "Clinical Neurology"],
    "life": ["Physiology", "Pharmacology Pharmacy", "Cell Biology", "Genetics Heredity", "Biology",
             "Neurosciences", "Biochemical Research Methods"],
    "engineering": ["Engineering Biomedical", "Chemistry Analytical"],
}
BETWEEN = {
    frozenset({"cardio", "clinical"}): 0.25,
    frozenset({"cardio", "life"}): 0.15,
    frozenset({"cardio", "engineering"}): 0.1,
    frozenset({"clinical", "life"}): 0.1,
    frozenset({"clinical", "engineering"}): 0.05,
    frozenset({"life", "engineering"}): 0.3,
}

JOURNALS = [
    ("Heart rhythm", "Heart Rhythm", [CORE]),
    ("Journal of cardiovascular electrophysiology", "J Cardiovasc Electrophysiol", [CORE]),
    ("Europace", "Europace", [CORE]),
    ("Circulation. Arrhythmia and electrophysiology", "Circ Arrhythm Electrophysiol", [CORE]),
    ("Journal of electrocardiology", "J Electrocardiol", [CORE]),
    ("International journal of cardiology", "Int J Cardiol", [CORE]),
    ("Internal medicine (Tokyo, Japan)", "Intern Med", ["Medicine General Internal"]),
    ("Resuscitation", "Resuscitation", ["Emergency Medicine"]),
]
SURNAMES = ["Brugada", "Postema", "Wilde", "Antzelevitch", "Priori", "Napolitano", "Probst",
            "Hoogendijk", "Coronel", "Nademanee", "Veerakul", "Kamakura", "Shimizu", "Sarkozy",
            "Benito", "Gussak", "Meregalli", "Tan", "Bezzina", "Müller", "García", "Ohrui"]
QUALIFIERS = ["diagnosis", "genetics", "physiopathology", "therapy", "epidemiology",
              "drug therapy", "mortality", "pathology", "complications"]
OTHER_MESH = ["Humans", "Male", "Female", "Adult", "Middle Aged", "Electrocardiography",
              "Death, Sudden, Cardiac/*prevention & control", "Defibrillators, Implantable",
              "NAV1.5 Voltage-Gated Sodium Channel/*genetics", "Mutation", "Pedigree"]
MONTHS = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"]


def allocate(total: int, n: int, minimum: int) -> list[int]:
    """Split ``total`` into ``n`` non-increasing parts each >= ``minimum``,
    shaped like a Zipf curve, with largest-remainder rounding."""
    rest = total - minimum * n
    weights = [1.0 / (k + 1) ** 0.9 for k in range(n)]
    scale = rest / sum(weights)
    raw = [w * scale for w in weights]
    base = [int(r) for r in raw]
    short = rest - sum(base)
    order = sorted(range(n), key=lambda k: (-(raw[k] - base[k]), k))
    for k in order[:short]:
        base[k] += 1
    parts = [minimum + b for b in base]
    assert sum(parts) == total
    return parts


def wrap(tag: str, value: str, width: int = 80) -> list[str]:
    words = value.split(" ")
    lines, current = [], ""
    for word in words:
        candidate = f"{current} {word}" if current else word
        if len(candidate) > width - 6 and current:
            lines.append(current)
            current = word
        else:
            current = candidate
    lines.append(current)
    out = [f"{tag:<4}- {lines[0]}"]
    out += ["      " + line for line in lines[1:]]
    return out


def similarity_value(a: str, b: str) -> float:
    if a == b:
        return 1.0
    ga = next(g for g, members in GROUPS.items() if a in members)
    gb = next(g for g, members in GROUPS.items() if b in members)
    if ga == gb:
        return 0.6
    return BETWEEN[frozenset({ga, gb})]


def main() -> None:
    rng = random.Random(20120224)
    OUT.mkdir(parents=True, exist_ok=True)

    # 286 in-scope records, then 10 from 2009 and 4 without the descriptor
    n_scope = 286
    kinds = ["scope"] * n_scope + ["early"] * 10 + ["other"] * 4
    pmids = [str(20000001 + 37 * i) for i in range(len(kinds))]

    with_ut = sorted(rng.sample(range(n_scope), 235))
    uts = ["000298415800028", "000297149900006"]
    uts += [f"{290000000000 + 104729 * k:015d}" for k in range(2, 235)]
    ut_of = dict(zip(with_ut, uts))

    # citation counts; documents are shuffled so TC is not tied to position
    docs = list(range(235))
    rng.shuffle(docs)
    feb = [0] * 235
    for doc, tc in zip(docs[:114], allocate(435, 114, 1)):
        feb[doc] = tc
    june = list(feb)
    increments = allocate(608 - 435 - 12, 114, 0)
    for doc, inc in zip(docs[:114], increments):
        june[doc] += inc
    for doc in docs[114:126]:
        june[doc] += 1
    assert sum(feb) == 435 and sum(1 for v in feb if v) == 114
    assert sum(june) == 608 and sum(1 for v in june if v) == 126

    # categories: 49 non-core papers, one of which gets the occupational triple
    order = list(range(235))
    rng.shuffle(order)
    noncore, core = order[:49], order[49:]
    cats: dict[int, list[str]] = {d: [CORE] for d in core}
    pool = []
    remaining = dict(WC_COUNTS[1:])
    for name in OCCUPATIONAL_TRIPLE:
        remaining[name] -= 1
    for name, count in WC_COUNTS[1:]:
        pool += [name] * remaining[name]
    cats[noncore[0]] = list(OCCUPATIONAL_TRIPLE)
    for d, name in zip(noncore[1:], pool[:48]):
        cats[d] = [name]
    for d, name in zip(core, pool[48:]):
        cats[d].append(name)
    assert sum(len(v) for v in cats.values()) == 292

    lines = []
    doc_of_record = {}
    for i, kind in enumerate(kinds):
        year = 2009 if kind == "early" else 2010 + (i % 2)
        month = MONTHS[(i * 5) % 12]
        jt, ta, _ = JOURNALS[i % len(JOURNALS)]
        volume, issue = str(5 + i % 50), str(1 + i % 12)
        first = 100 + (i * 13) % 1800
        authors = [rng.choice(SURNAMES) + " " + rng.choice("ABCDEFGHJKLMPRSTVW") for _ in range(1 + i % 6)]
        title = (
            f"Synthetic fixture record {i + 1}: conduction and repolarization findings in "
            f"{'a cohort' if i % 3 else 'a family'} evaluated for Brugada-type ST-segment elevation."
        )
        abstract = (
            "BACKGROUND: This abstract is synthetic and exists only to exercise the MEDLINE "
            "parser with a long, wrapped field. METHODS: Twelve-lead electrocardiograms were "
            f"reviewed for record {i + 1}. RESULTS: No clinical conclusions should be drawn. "
            "CONCLUSION: Fixture data only."
        )
        if kind == "other":
            mesh = ["*Long QT Syndrome/diagnosis", "Humans"]
        else:
            q = rng.sample(QUALIFIERS, 1 + i % 3)
            star = "*" if i % 4 == 0 else ""
            mesh = [f"{star}Brugada Syndrome/" + "/".join(("*" if k == 0 and not star else "") + x
                                                         for k, x in enumerate(q))]
            mesh += rng.sample(OTHER_MESH, 3)
        rec = [f"PMID- {pmids[i]}", "OWN - NLM", "STAT- MEDLINE", f"DCOM- {year + 1}0115"]
        rec += [f"IS  - 1547-{5271 + i % 7:04d} (Electronic)", f"VI  - {volume}", f"IP  - {issue}"]
        rec += [f"DP  - {year} {month}"]
        rec += wrap("TI", title)
        rec += [f"PG  - {first}-{(first + 7) % 1000}"]
        rec += wrap("AB", abstract)
        for a in authors:
            rec += [f"AU  - {a}"]
        rec += ["LA  - eng", "PT  - Journal Article", f"PL  - {'United States' if i % 2 else 'England'}"]
        rec += [f"TA  - {ta}", f"JT  - {jt}"]
        for m in mesh:
            rec += wrap("MH", m)
        if kind == "scope" and i in ut_of:
            rec += [f"UT  - {ut_of[i]}"]
            doc_of_record[i] = with_ut.index(i)
        rec += wrap("SO", f"{ta}. {year} {month};{volume}({issue}):{first}-{(first + 7) % 1000}.")
        lines.append("\n".join(rec))
    (OUT / "medline.txt").write_text("\n\n".join(lines) + "\n", encoding="utf-8")

    header = ["PT", "AU", "TI", "SO", "PY", "TC", "WC", "UT", "PM"]
    for name, tcs in (("wos_2012-02.txt", feb), ("wos_2012-06.txt", june)):
        rows = ["\t".join(header)]
        export_order = list(ut_of.items())
        random.Random(name).shuffle(export_order)
        for rec_index, ut in export_order:
            d = doc_of_record[rec_index]
            jt = JOURNALS[rec_index % len(JOURNALS)][0].upper()
            rows.append("\t".join([
                "J", "Fixture, A", f"Synthetic fixture record {rec_index + 1}", jt,
                str(2010 + rec_index % 2), str(tcs[d]), "; ".join(cats[d]), f"WOS:{ut}",
                pmids[rec_index],
            ]))
        (OUT / name).write_text("\n".join(rows) + "\n", encoding="utf-8")

    cat_rows = ["pmid,wos_ut,categories"]
    for rec_index, ut in ut_of.items():
        joined = "; ".join(cats[doc_of_record[rec_index]])
        cat_rows.append(f'{pmids[rec_index]},{ut},"{joined}"')
    (OUT / "categories.csv").write_text("\n".join(cat_rows) + "\n", encoding="utf-8")

    labels = [name for name, _ in WC_COUNTS]
    for fname, value in (("similarity_all_distinct.csv", lambda a, b: 1.0 if a == b else 0.0),
                         ("similarity_toy.csv", similarity_value)):
        out = ["," + ",".join(labels)]
        for a in labels:
            out.append(a + "," + ",".join(repr(float(value(a, b))) for b in labels))
        (OUT / fname).write_text("\n".join(out) + "\n", encoding="utf-8")

    # every record without a UT gets a crosswalk entry for half of them
    missing = [i for i in range(n_scope) if i not in ut_of]
    xw = ["pmid,wos_ut"]
    for k, i in enumerate(missing[: len(missing) // 2]):
        xw.append(f"{pmids[i]},{310000000000 + 7919 * k:015d}")
    (OUT / "crosswalk.csv").write_text("\n".join(xw) + "\n", encoding="utf-8")

    (OUT / "meshcite.cfg").write_text(
        "# Offline run over the synthetic Brugada fixture\n"
        "[meshcite]\n"
        "input = medline.txt\n"
        "mesh = Brugada Syndrome\n"
        "years = 2010-2011\n"
        "wos_export = wos_2012-06.txt\n"
        "similarity = similarity_toy.csv\n"
        f"core = {CORE}\n"
        "offline = true\n",
        encoding="utf-8",
    )


if __name__ == "__main__":
    main()
