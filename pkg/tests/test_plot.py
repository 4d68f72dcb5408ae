import re
import xml.etree.ElementTree as ET

import pytest

from pressura.experiments.plot import axes_for, collect_series, render_timeseries
from pressura.experiments.stats import StatsWriter

SVG = "{http://www.w3.org/2000/svg}"


def write_stats(path, rows):
    with StatsWriter(str(path)) as w:
        for r in rows:
            w.write(r)
    return str(path)


def polylines(path):
    root = ET.parse(path).getroot()
    out = []
    for el in root.iter(SVG + "polyline"):
        pts = [tuple(map(float, p.split(","))) for p in el.get("points").split()]
        out.append((el.get("data-label"), pts))
    return root, out


def test_vertices_are_affine_images_of_the_data(tmp_path):
    data = [(0, 20.0), (10, 22.5), (20, 21.0), (30, 30.25), (40, 18.0)]
    src = write_stats(tmp_path / "s.csv", [{"update": u, "mean_length": y} for u, y in data])
    out = render_timeseries(src, "mean_length", str(tmp_path / "p.svg"))
    _, lines = polylines(out)
    assert len(lines) == 1
    (_, pts), = lines
    assert len(pts) == len(data)
    # solve the affine map from two vertices and check the rest against it
    (x0, y0), (x1, y1) = data[0], data[3]
    (p0, q0), (p1, q1) = pts[0], pts[3]
    sx, sy = (p1 - p0) / (x1 - x0), (q1 - q0) / (y1 - y0)
    assert sx > 0 and sy < 0  # updates to the right, larger values upward
    for (x, y), (px, py) in zip(data, pts):
        assert px == pytest.approx(p0 + (x - x0) * sx, abs=1e-3)
        assert py == pytest.approx(q0 + (y - y0) * sy, abs=1e-3)


def test_constant_series_is_horizontal(tmp_path):
    src = write_stats(tmp_path / "s.csv", [{"update": u, "nu": 0.4} for u in (0, 5, 9)])
    _, lines = polylines(render_timeseries(src, ["nu"], str(tmp_path / "p.svg")))
    ys = {py for _, py in lines[0][1]}
    assert len(ys) == 1


def test_multiple_files_give_one_polyline_each(tmp_path):
    paths = []
    for k, name in enumerate(("v", "vi", "vii")):
        d = tmp_path / name
        d.mkdir()
        paths.append(write_stats(d / "aggregate.csv",
                                 [{"update": u, "nu": 0.1 * k + u / 1000} for u in (0, 500)]))
    root, lines = polylines(render_timeseries(paths, "nu", str(tmp_path / "nu.svg")))
    assert [label for label, _ in lines] == ["v/aggregate", "vi/aggregate", "vii/aggregate"]
    text = ET.tostring(root, encoding="unicode")
    assert "href" not in text  # self-contained
    assert re.search(r">update<", text) and re.search(r">nu<", text)


def test_unmeasured_cells_are_skipped(tmp_path):
    src = write_stats(tmp_path / "s.csv", [{"update": 0}, {"update": 10, "nu": 0.2},
                                           {"update": 20}, {"update": 30, "nu": 0.3}])
    series = collect_series([src], ["nu"])
    assert series[0].xs == (10.0, 30.0)
    ax = axes_for(series)
    assert ax.y0 <= 0.2 and ax.y1 >= 0.3


def test_plot_errors(tmp_path):
    src = write_stats(tmp_path / "s.csv", [{"update": 0}])
    with pytest.raises(KeyError):
        render_timeseries(src, "bogus", str(tmp_path / "p.svg"))
    with pytest.raises(ValueError):
        render_timeseries(src, "nu", str(tmp_path / "p.svg"))
    with pytest.raises(ValueError):
        render_timeseries(src, "", str(tmp_path / "p.svg"))
