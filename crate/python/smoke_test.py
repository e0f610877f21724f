"""Smoke test for the `ptolemy` extension module.

Build and install first:

    pip install maturin
    pip install --no-build-isolation -e crates/py
"""
import cmath
import json

import ptolemy


def main():
    assert "figure8" in ptolemy.fixture_names()

    fig8 = ptolemy.Triangulation.fixture("figure8")
    assert fig8.num_tetrahedra == 2 and fig8.num_cusps == 1
    assert fig8.num_obstruction_classes() == 2
    assert len(fig8.ptolemy_relations(1)) == 2
    assert fig8.fields(0) == []
    assert fig8.fields(1) == ["x^2 - x + 1"]

    for shapes in fig8.shapes(1):
        for z in shapes:
            assert abs(z * z - z + 1) < 1e-10
            assert abs(abs(cmath.phase(z)) - cmath.pi / 3) < 1e-10
    assert fig8.face_residual(1) < 1e-10

    sister = ptolemy.Triangulation.fixture("sister")
    assert sister.fields(0) == ["x^2 - x - 1"]
    assert sister.fields(1) == ["x^2 + x + 1"]

    text = ptolemy.Triangulation(fig8.to_text())
    assert text.edge_classes() == fig8.edge_classes()

    report = json.loads(fig8.run())
    comp = report["classes"][1]["solve"]["components"][0]
    assert comp["trace_field"]["fields_agree"]

    try:
        ptolemy.Triangulation("tetrahedra: 1\n")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed input accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
