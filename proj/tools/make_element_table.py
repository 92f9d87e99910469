#!/usr/bin/env python3
"""Emit the embedded periodic-table grid file (symbol,Z,row,col,block).

Grid convention: 9 rows x 18 columns. Rows 0-6 are periods 1-7 with the
f-elements pulled out; row 7 holds La..Lu (Z 57-71) at columns 3-17 and
row 8 holds Ac..Lr (Z 89-103) at columns 3-17.
"""

import sys

SYMBOLS = (
    "H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca "
    "Sc Ti V Cr Mn Fe Co Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr "
    "Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb Te I Xe Cs Ba La Ce Pr Nd "
    "Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re Os Ir Pt Au Hg "
    "Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es Fm "
    "Md No Lr Rf Db Sg Bh Hs Mt Ds Rg Cn Nh Fl Mc Lv Ts Og"
).split()

PERIOD_START = {1: 1, 2: 3, 3: 11, 4: 19, 5: 37, 6: 55, 7: 87}


def period_of(z):
    for p in range(7, 0, -1):
        if z >= PERIOD_START[p]:
            return p
    raise ValueError(z)


def group_of(z, p):
    off = z - PERIOD_START[p]
    if p == 1:
        return 1 if off == 0 else 18
    if p in (2, 3):
        return off + 1 if off < 2 else off + 11
    if p in (4, 5):
        return off + 1
    # periods 6 and 7: 15 f-elements sit between group 2 and group 4
    if off < 2:
        return off + 1
    if off < 17:
        return None  # lanthanide/actinide
    return off - 13


def grid_position(z):
    if 57 <= z <= 71:
        return 7, 3 + (z - 57), "F"
    if 89 <= z <= 103:
        return 8, 3 + (z - 89), "F"
    p = period_of(z)
    g = group_of(z, p)
    assert g is not None
    if z == 1:
        col = 0
    elif z == 2:
        col = 17
    else:
        col = g - 1 if g <= 2 else g - 1
    block = "S" if (g <= 2 or z == 2) else ("P" if g >= 13 else "D")
    return p - 1, col, block


def main():
    out = sys.stdout
    out.write("symbol,atomic_number,row,col,block\n")
    for i, sym in enumerate(SYMBOLS):
        z = i + 1
        r, c, b = grid_position(z)
        out.write(f"{sym},{z},{r},{c},{b}\n")


if __name__ == "__main__":
    main()
