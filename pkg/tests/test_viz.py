from src.models.builders import chain
from src.viz.hasse import class_heights, draw_hasse, hasse_layout


def test_class_heights(pfn2):
    assert class_heights(pfn2).tolist() == [0, 1, 1, 2]


def test_layout_puts_each_class_on_one_row(pfn2):
    pos = hasse_layout(pfn2)
    assert {pos[e][1] for e in (4, 5, 7, 8)} == {2.0}
    assert pos[0] == (0.0, 0.0)


def test_draw_chain(tmp_path):
    out = draw_hasse(chain(4), str(tmp_path / "chain4.png"), title="chain")
    assert (tmp_path / "chain4.png").exists()
    assert out.endswith("chain4.png")
