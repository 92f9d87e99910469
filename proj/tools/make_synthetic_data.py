#!/usr/bin/env python3
"""Generate the bundled synthetic band-gap corpus.

Real measured band-gap data is an external download (see README). This
script fabricates a stand-in corpus whose targets are a smooth function of
the elements' periodic-table positions plus noise, so that models reading
the table representation can learn it: gapped compounds are cation/anion
combinations with gap = anion base level + cation-family shift -
d-electron penalty + noise; non-gapped entries are metals, alloys, and a
slice of metallic oxides.

Usage: make_synthetic_data.py [out_dir] [seed]
"""

import random
import sys

ALKALI = ["Li", "Na", "K", "Rb", "Cs"]
ALKALINE = ["Be", "Mg", "Ca", "Sr", "Ba"]
POST_TRANSITION = ["Al", "Ga", "In", "Sn", "Pb", "Bi", "Zn", "Cd"]
TRANSITION = ["Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
              "Y", "Zr", "Nb", "Mo", "Ru", "Rh", "Pd", "Ag",
              "Hf", "Ta", "W", "Re", "Ir", "Pt", "Au"]
LANTHANIDE = ["La", "Ce", "Pr", "Nd", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Yb"]
ANIONS = {
    "F": 6.6, "Cl": 5.2, "Br": 4.2, "I": 3.2,
    "O": 4.0, "S": 2.6, "Se": 2.0, "Te": 1.5,
    "N": 2.8, "P": 1.7,
}
FAMILY_SHIFT = {}
for el in ALKALI:
    FAMILY_SHIFT[el] = 1.6
for el in ALKALINE:
    FAMILY_SHIFT[el] = 1.1
for el in LANTHANIDE:
    FAMILY_SHIFT[el] = 0.7
for el in POST_TRANSITION:
    FAMILY_SHIFT[el] = 0.1
for el in TRANSITION:
    FAMILY_SHIFT[el] = -1.4

CATIONS = ALKALI + ALKALINE + POST_TRANSITION + TRANSITION + LANTHANIDE

STOICH = [(1, 1), (1, 2), (2, 1), (2, 3), (1, 3), (3, 1), (2, 5), (3, 4)]


def fmt_count(n):
    if abs(n - round(n)) < 1e-9:
        n = int(round(n))
        return "" if n == 1 else str(n)
    return ("%g" % n)


def formula_of(parts):
    return "".join(sym + fmt_count(n) for sym, n in parts)


def gap_value(parts, rng):
    anion_base, anion_n, cation_shift, cation_n, d_frac, total = 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    for sym, n in parts:
        total += n
        if sym in ANIONS:
            anion_base += ANIONS[sym] * n
            anion_n += n
        else:
            cation_shift += FAMILY_SHIFT[sym] * n
            cation_n += n
            if sym in TRANSITION:
                d_frac += n
    base = anion_base / anion_n
    shift = cation_shift / cation_n
    anion_frac = anion_n / total
    g = base * (0.55 + 0.9 * anion_frac) + shift - 2.2 * (d_frac / total)
    g += rng.gauss(0.0, 0.25)
    return g


def gen_gapped(rng, n_unique):
    seen = {}
    rows = []
    while len(rows) < n_unique:
        kind = rng.random()
        anion = rng.choice(list(ANIONS))
        if kind < 0.6:  # binary
            cation = rng.choice(CATIONS)
            a, b = rng.choice(STOICH)
            parts = [(cation, a), (anion, b)]
        elif kind < 0.9:  # ternary, two cations
            c1, c2 = rng.sample(CATIONS, 2)
            a, b = rng.choice(STOICH)
            parts = [(c1, a), (c2, rng.choice([1, 2])), (anion, b + rng.choice([1, 2]))]
        else:  # doped
            c1, c2 = rng.sample(CATIONS, 2)
            x = round(rng.uniform(0.05, 0.45), 2)
            parts = [(c1, round(1 - x, 2)), (c2, x), (anion, rng.choice([1, 2, 3]))]
        f = formula_of(parts)
        if f in seen:
            continue
        g = gap_value(parts, rng)
        if g <= 0.15:
            continue
        seen[f] = parts
        rows.append((f, round(g, 4)))
    # retained duplicate compositions with re-measured gaps
    dup_pool = rng.sample(rows, max(1, len(rows) // 20))
    for f, _ in dup_pool:
        g = gap_value(seen[f], rng)
        if g > 0.15:
            rows.append((f, round(g, 4)))
    rng.shuffle(rows)
    return rows


def gen_nongapped(rng, n_unique):
    metals = CATIONS
    seen = set()
    rows = []
    while len(rows) < n_unique:
        kind = rng.random()
        if kind < 0.4:  # pure metal or simple alloy
            parts = [(rng.choice(metals), 1)]
            if rng.random() < 0.6:
                other = rng.choice(metals)
                if other != parts[0][0]:
                    parts.append((other, rng.choice([1, 2, 3])))
        elif kind < 0.92:  # intermetallic, 2-3 species
            k = rng.choice([2, 3])
            syms = rng.sample(metals, k)
            parts = [(s, rng.choice([1, 1, 2, 3])) for s in syms]
        else:  # metallic oxide/nitride: transition-heavy, low anion content
            tm = rng.choice(TRANSITION)
            anion = rng.choice(["O", "N"])
            parts = [(tm, rng.choice([1, 2, 3])), (anion, 1)]
        f = formula_of(parts)
        if f in seen:
            continue
        seen.add(f)
        rows.append((f, 0.0))
    return rows


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "data"
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 20240817
    rng = random.Random(seed)

    gapped = gen_gapped(rng, 2600)
    nongapped = gen_nongapped(rng, 2450)

    with open(f"{out_dir}/synthetic_gapped.csv", "w") as f:
        f.write("composition,target,source\n")
        for formula, gap in gapped:
            f.write(f"{formula},{gap},experimental\n")
    with open(f"{out_dir}/synthetic_nongapped.csv", "w") as f:
        f.write("composition,target,source\n")
        for formula, _ in nongapped:
            f.write(f"{formula},0,computed\n")
    with open(f"{out_dir}/sample_gapped.csv", "w") as f:
        f.write("composition,target,source\n")
        for formula, gap in gapped[:200]:
            f.write(f"{formula},{gap},experimental\n")
    with open(f"{out_dir}/sample_nongapped.csv", "w") as f:
        f.write("composition,target,source\n")
        for formula, _ in nongapped[:200]:
            f.write(f"{formula},0,computed\n")
    gaps = [g for _, g in gapped]
    print(f"gapped rows: {len(gapped)}  nongapped rows: {len(nongapped)}")
    print(f"gap range: {min(gaps):.2f}..{max(gaps):.2f} eV, "
          f"mean {sum(gaps)/len(gaps):.2f}")


if __name__ == "__main__":
    main()
