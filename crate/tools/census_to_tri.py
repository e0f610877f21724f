#!/usr/bin/env python3
"""Convert a SnapPy census manifold into the plain-text triangulation format.

Requires the `snappy` Python package. Writes the face gluings and, for n = 2,
the identification signs reported by SnapPy's Ptolemy module (relative to the
lexicographically least instance of each edge class).

    python3 tools/census_to_tri.py m019 > m019.tri

SnapPy's obstruction class representatives are appended as `cocycle` blocks
listing the faces with sign -1.
"""
import sys

import snappy


def edge_point(i, j):
    t = [0, 0, 0, 0]
    t[i] += 1
    t[j] += 1
    return tuple(t)


def parse_var(name):
    _, t, k = name.split("_")
    return int(k), tuple(int(ch) for ch in t)


def sign_table(manifold):
    variety = manifold.ptolemy_variety(2, 0)
    parent = {}

    def find(x):
        sign = 1
        while parent.get(x, (x, 1))[0] != x:
            x, s = parent[x]
            sign *= s
        return x, sign

    for sign, _power, a, b in variety._identified_variables:
        if not (a.startswith("c_") and isinstance(b, str) and b.startswith("c_")):
            continue
        ra, sa = find(parse_var(a))
        rb, sb = find(parse_var(b))
        if ra != rb:
            parent[rb] = (ra, sign * sa * sb)

    instances = [
        (k, edge_point(i, j))
        for k in range(manifold.num_tetrahedra())
        for i in range(4)
        for j in range(i + 1, 4)
    ]
    classes = {}
    for inst in instances:
        root, sign = find(inst)
        classes.setdefault(root, []).append((inst, sign))
    table = {}
    for members in classes.values():
        members.sort()
        rep_sign = members[0][1]
        for inst, sign in members:
            table[inst] = sign * rep_sign
    return table


def cocycle_text(manifold):
    out = []
    for cls in manifold.ptolemy_obstruction_classes():
        out.append("cocycle")
        for sign, _power, var, value in cls.identified_variables:
            if value == 1 and sign == -1:
                _, face, tet = var.split("_")
                out.append(f"  tet {tet} face {face} -")
    return "\n".join(out) + "\n"


def main():
    name = sys.argv[1]
    manifold = snappy.Manifold(name)
    out = [f"name: {name}", f"tetrahedra: {manifold.num_tetrahedra()}"]
    neighbors = manifold._get_tetrahedra_gluing_data()
    for k, (nbrs, perms) in enumerate(neighbors):
        out.append(f"tet {k}")
        for face in range(4):
            perm = " ".join(str(v) for v in perms[face])
            out.append(f"  face {face} -> tet {nbrs[face]} perm {perm}")
    out.append("signs 2")
    for (k, t), sign in sorted(sign_table(manifold).items()):
        out.append(f"  tet {k} point {' '.join(map(str, t))} {'+' if sign > 0 else '-'}")
    out.append("# obstruction class representatives (SnapPy's choice)")
    print("\n".join(out))
    print(cocycle_text(manifold), end="")


if __name__ == "__main__":
    main()
