"""Regenerate tests/data/medline_corpus.txt.

A 60-record corpus in the NLM MEDLINE layout, exercising the tag variety of
real PubMed exports: FAU/AU pairs, long wrapped affiliations, AID/LID with
bracketed types, PHST dates, RN substance lines, OT keywords, comment links,
non-ASCII names, bracketed translated titles, and MH headings with starred
descriptors and qualifiers. Bibliographic details echo well-known
cardiology and bibliometrics papers; PMIDs are synthetic.

Run from the repository root: ``python scripts/make_medline_corpus.py``.
"""

from __future__ import annotations

import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "medline_corpus.txt"

BASES = [
    ("Right bundle branch block, persistent ST segment elevation and sudden cardiac death: "
     "a distinct clinical and electrocardiographic syndrome. A multicenter report.",
     "Journal of the American College of Cardiology", "J Am Coll Cardiol", "1992 Nov 15",
     "20", "6", "1391-6", [("Brugada, Pedro", "Brugada P"), ("Brugada, Josep", "Brugada J")]),
    ("The Brugada ECG pattern: a marker of channelopathy, structural heart disease, or neither? "
     "Toward a unifying mechanism of the Brugada syndrome.",
     "Circulation. Arrhythmia and electrophysiology", "Circ Arrhythm Electrophysiol", "2010 Jun",
     "3", "3", "283-90", [("Hoogendijk, Mark G", "Hoogendijk MG"), ("Postema, Pieter G", "Postema PG"),
                         ("Wilde, Arthur A M", "Wilde AA"), ("de Bakker, Jacques M T", "de Bakker JM"), ("Coronel, Ruben", "Coronel R")]),
    ("Risk stratification in Brugada syndrome: results of the PRELUDE (PRogrammed ELectrical "
     "stimUlation preDictive valuE) registry.",
     "Journal of the American College of Cardiology", "J Am Coll Cardiol", "2012 Jan 3",
     "59", "1", "37-45", [("Priori, Silvia G", "Priori SG"), ("Gasparini, Maurizio", "Gasparini M"),
                         ("Napolitano, Carlo", "Napolitano C"), ("Della Bella, Paolo", "Della Bella P")]),
    ("The pathophysiological mechanism underlying Brugada syndrome: depolarization versus "
     "repolarization.",
     "Journal of molecular and cellular cardiology", "J Mol Cell Cardiol", "2010 Oct",
     "49", "4", "543-53", [("Wilde, Arthur A M", "Wilde AA"), ("Postema, Pieter G", "Postema PG"),
                          ("Di Diego, José M", "Di Diego JM"), ("Viskin, Sami", "Viskin S"),
                          ("Antzelevitch, Charles", "Antzelevitch C")]),
    ("Decadal electrocardiographic changes between age 40 and 50 in military pilots.",
     "Aviation, space, and environmental medicine", "Aviat Space Environ Med", "2011 Sep",
     "82", "9", "904-8", [("Ohrui, Nobuhiro", "Ohrui N"), ("Hisada, Toshimitsu", "Hisada T"),
                         ("Tsujimoto, Yasuhiro", "Tsujimoto Y")]),
    ("Citation counts for research evaluation: standards of good practice for analyzing "
     "bibliometric data and presenting and interpreting results.",
     "Ethics in science and environmental politics", "Ethics Sci Environ Polit", "2008",
     "8", "1", "93-102", [("Bornmann, Lutz", "Bornmann L"), ("Mutz, Rüdiger", "Mutz R")]),
]

AFFILIATIONS = [
    "Department of Experimental Cardiology, Heart Failure Research Center, Academic Medical "
    "Center, Meibergdreef 9, 1105 AZ Amsterdam, The Netherlands. m.hoogendijk@example.org",
    "Arrhythmia Section, Thorax Institute, Hospital Clinic, University of Barcelona, "
    "Villarroel 170, 08036 Barcelona, Spain.",
    "Molecular Cardiology Laboratories, IRCCS Fondazione Salvatore Maugeri, Pavia, Italy.",
    "Aeromedical Laboratory, Japan Air Self-Defense Force, Tokyo, Japan.",
    "Masonic Medical Research Laboratory, Utica, NY 13501, USA.",
]
MESH = [
    "Brugada Syndrome/*diagnosis/genetics/physiopathology",
    "*Brugada Syndrome",
    "Humans",
    "Male",
    "Electrocardiography/*methods",
    "Death, Sudden, Cardiac/*etiology/prevention & control",
    "Arrhythmias, Cardiac/*physiopathology",
    "Sodium Channels/*genetics",
    "Bibliometrics",
    "Periodicals as Topic/*statistics & numerical data",
    "Medical Subject Headings",
    "Aerospace Medicine",
    "Military Personnel",
    "Heart Conduction System/*abnormalities/physiopathology",
    "Risk Assessment",
]
SUBSTANCES = [
    "0 (NAV1.5 Voltage-Gated Sodium Channel)",
    "0 (SCN5A protein, human)",
    "0 (Sodium Channels)",
]
KEYWORDS = ["Brugada syndrome", "sudden cardiac death", "citation analysis", "MeSH",
            "Web of Science", "interdisciplinarity"]


def wrap(tag, value, width=80):
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
    return [f"{tag:<4}- {lines[0]}"] + ["      " + x for x in lines[1:]]


def record(i: int, rng: random.Random) -> str:
    title, jt, ta, dp, vi, ip, pg, authors = BASES[i % len(BASES)]
    pmid = str(1300000 + 7919 * i)
    year = dp[:4]
    lines = [f"PMID- {pmid}", "OWN - NLM", "STAT- MEDLINE" if i % 5 else "STAT- PubMed-not-MEDLINE"]
    lines += [f"DCOM- {int(year) + 1}0312", f"LR  - 2016112{i % 10}"]
    lines += [f"IS  - 0735-{1097 + i % 5:04d} (Print)", f"IS  - 1558-{3597 + i % 3:04d} (Linking)"]
    if i % 7 != 3:
        lines.append(f"VI  - {vi}")
    if i % 6 != 2:
        lines.append(f"IP  - {ip}")
    lines.append(f"DP  - {dp}")
    t = title if i < len(BASES) else f"{title[:-1]} ({i // len(BASES)})."
    if i % 11 == 4:
        t = f"[{t[:-1]}]."
        lines += wrap("TI", t)
        lines.append("TT  - Ein Titel mit Umlauten: Überleitungsstörung und plötzlicher Herztod.")
    else:
        lines += wrap("TI", t)
    if i % 9 != 8:
        lines.append(f"PG  - {pg}")
    lines.append(f"LID - 10.1016/j.example.{year}.{i:04d} [doi]")
    if i % 4:
        abstract = (
            "BACKGROUND: " + t + " METHODS: " + " ".join(rng.sample(KEYWORDS, 3)) + ". "
            "RESULTS: All values shown are illustrative. "
            "CONCLUSIONS: The record layout, not its content, is under test here."
        )
        lines += wrap("AB", abstract)
    if i % 3 == 0:
        lines += wrap("CI", "(c) 2012 Wiley Periodicals, Inc.")
    for k, (fau, au) in enumerate(authors[: 1 + i % len(authors)]):
        lines.append(f"FAU - {fau}")
        lines.append(f"AU  - {au}")
        if k == 0 or i % 2:
            lines += wrap("AD", AFFILIATIONS[(i + k) % len(AFFILIATIONS)])
    if i % 8 == 5:
        lines.append("CN  - PRELUDE Investigators")
    lines.append("LA  - eng" if i % 11 != 4 else "LA  - ger")
    lines.append("PT  - Journal Article")
    if i % 3 == 1:
        lines.append("PT  - Multicenter Study")
    if i % 4 == 2:
        lines.append("PT  - Research Support, Non-U.S. Gov't")
    lines.append(f"DEP - {year}1207")
    lines.append("PL  - United States")
    lines += [f"TA  - {ta}", f"JT  - {jt}", f"JID - {8301365 + i}"]
    if i % 2 == 0:
        for s in SUBSTANCES[: 1 + i % 3]:
            lines.append(f"RN  - {s}")
    lines.append("SB  - IM")
    if i % 10 == 7:
        lines.append(f"CIN - {ta}. {year};{vi}({ip}):1-2. PMID: {1300000 + 7919 * (i + 1)}")
    for mh in rng.sample(MESH, 2 + i % 6):
        lines += wrap("MH", mh)
    if i % 5 == 1:
        lines.append("OTO - NOTNLM")
        for kw in rng.sample(KEYWORDS, 3):
            lines.append(f"OT  - {kw}")
    lines += [f"EDAT- {year}/11/15 00:00", f"MHDA- {year}/12/13 06:00", f"CRDT- {year}/11/15 00:00"]
    lines += [f"PHST- {year}/06/0{1 + i % 9} [received]", f"PHST- {year}/08/2{i % 9} [accepted]"]
    lines.append(f"AID - S0735-1097({year[2:]})9{i:04d}-X [pii]")
    lines.append(f"AID - 10.1016/j.example.{year}.{i:04d} [doi]")
    lines.append("PST - ppublish")
    so = f"{ta}. {dp};{vi}({ip}):{pg}. doi: 10.1016/j.example.{year}.{i:04d}."
    lines += wrap("SO", so)
    return "\n".join(lines)


def main() -> None:
    rng = random.Random(1992)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    text = "\n" + "\n\n".join(record(i, rng) for i in range(60)) + "\n"
    OUT.write_text(text, encoding="utf-8")


if __name__ == "__main__":
    main()
