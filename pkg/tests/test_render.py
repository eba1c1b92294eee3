import pytest

from sftkit.errors import InputError
from sftkit.machine import BLANK, TilePatch, diagram_to_patch, example_machine, run, transmit_tile
from sftkit.render import PX, render, render_pgm, render_svg, render_text

TM = example_machine()


def five_steps():
    return diagram_to_patch(run(TM, "", 5), TM, 7)


def test_transmit_svg():
    svg = render_svg(TilePatch(((transmit_tile("1"),),))).decode()
    assert svg.count("<polygon") == 4
    assert svg.count("<text") == 2


def test_five_step_text():
    lines = render_text(five_steps()).splitlines()
    assert len(lines) == 6
    assert all(len(l.split()) == 7 for l in lines)
    assert lines[-1].split()[0] == "S" and lines[0].split()[0] == "|"
    assert lines[0].split()[:4] == ["|", "1", "0", "(a,_)"]


def test_pgm_header_and_size():
    data = render_pgm(five_steps())
    head = f"P5\n{7 * PX} {6 * PX}\n255\n".encode()
    assert data.startswith(head)
    assert len(data) == len(head) + 7 * PX * 6 * PX


@pytest.mark.parametrize("fmt", ["text", "pgm", "svg"])
def test_deterministic(fmt):
    assert render(five_steps(), fmt) == render(five_steps(), fmt)


def test_unknown_format():
    with pytest.raises(InputError):
        render(five_steps(), "png")


def test_blank_transmit_has_labels():
    svg = render_svg(TilePatch(((transmit_tile(BLANK),),))).decode()
    assert svg.count("<text") == 2
