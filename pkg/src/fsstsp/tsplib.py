"""TSPLIB reading and writing (EUC_2D subset) plus reference tour lengths.

Node ids are 1-based on disk and 0-based everywhere else; the conversion
happens here and nowhere else.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence


class TsplibError(ValueError):
    """Base class for malformed or unsupported TSPLIB input."""


class TsplibParseError(TsplibError):
    def __init__(self, message: str, line_no: Optional[int] = None, line: str = ""):
        if line_no is not None:
            message = f"line {line_no}: {message}: {line.strip()!r}"
        super().__init__(message)
        self.line_no = line_no


class UnsupportedTypeError(TsplibError):
    pass


class DimensionError(TsplibError):
    pass


@dataclass(frozen=True)
class RawInstance:
    name: str
    dimension: int
    coords: tuple[tuple[float, float], ...]
    edge_weight_type: str = "EUC_2D"

    def __post_init__(self) -> None:
        if self.dimension < 3:
            raise DimensionError(f"dimension must be >= 3, got {self.dimension}")
        if len(self.coords) != self.dimension:
            raise DimensionError(
                f"{len(self.coords)} coordinates for dimension {self.dimension}")
        if self.edge_weight_type != "EUC_2D":
            raise UnsupportedTypeError(
                f"unsupported EDGE_WEIGHT_TYPE {self.edge_weight_type!r}")


_KEYWORD = re.compile(r"^\s*([A-Z_]+)\s*(?::\s*(.*?))?\s*$")
_SECTIONS = {"NODE_COORD_SECTION", "TOUR_SECTION"}


def _split_header(text: str, section: str):
    """Yield (header dict, body lines with line numbers) for a TSPLIB file."""
    header: dict[str, str] = {}
    lines = text.splitlines()
    for idx, line in enumerate(lines):
        if not line.strip():
            continue
        m = _KEYWORD.match(line)
        if m is None:
            raise TsplibParseError("expected 'KEYWORD: value'", idx + 1, line)
        key, value = m.group(1), m.group(2)
        if key in _SECTIONS:
            if key != section:
                raise TsplibParseError(f"unexpected section {key}", idx + 1, line)
            return header, [(i + 1, lines[i]) for i in range(idx + 1, len(lines))]
        if key == "EOF":
            break
        if value is None:
            raise TsplibParseError(f"keyword {key} has no value", idx + 1, line)
        header[key] = value
    raise TsplibParseError(f"missing {section}")


def _dimension(header: dict[str, str]) -> int:
    if "DIMENSION" not in header:
        raise TsplibParseError("missing DIMENSION")
    try:
        return int(header["DIMENSION"])
    except ValueError:
        raise TsplibParseError(f"bad DIMENSION {header['DIMENSION']!r}") from None


def parse_instance(text: str) -> RawInstance:
    """Parse the text of a TSPLIB ``.tsp`` file with EUC_2D weights."""
    header, body = _split_header(text, "NODE_COORD_SECTION")
    ewt = header.get("EDGE_WEIGHT_TYPE")
    if ewt is None:
        raise TsplibParseError("missing EDGE_WEIGHT_TYPE")
    if ewt != "EUC_2D":
        raise UnsupportedTypeError(f"unsupported EDGE_WEIGHT_TYPE {ewt!r}")
    if "NAME" not in header:
        raise TsplibParseError("missing NAME")
    dim = _dimension(header)
    if dim < 3:
        raise DimensionError(f"dimension must be >= 3, got {dim}")

    coords: list[Optional[tuple[float, float]]] = [None] * dim
    count = 0
    for line_no, line in body:
        s = line.strip()
        if not s:
            continue
        if s == "EOF":
            break
        parts = s.split()
        if len(parts) != 3:
            raise TsplibParseError("expected 'id x y'", line_no, line)
        try:
            node = int(parts[0])
            x, y = float(parts[1]), float(parts[2])
        except ValueError:
            raise TsplibParseError("non-numeric coordinate line", line_no, line) from None
        if not 1 <= node <= dim:
            raise DimensionError(f"line {line_no}: node id {node} outside 1..{dim}")
        if coords[node - 1] is not None:
            raise TsplibParseError(f"duplicate node id {node}", line_no, line)
        coords[node - 1] = (x, y)
        count += 1
    if count != dim:
        raise DimensionError(f"DIMENSION is {dim} but {count} coordinates were given")
    return RawInstance(header["NAME"], dim, tuple(coords), ewt)  # type: ignore[arg-type]


def format_instance(raw: RawInstance, comment: Optional[str] = None) -> str:
    lines = [f"NAME : {raw.name}"]
    if comment:
        lines.append(f"COMMENT : {comment}")
    lines += [
        "TYPE : TSP",
        f"DIMENSION : {raw.dimension}",
        f"EDGE_WEIGHT_TYPE : {raw.edge_weight_type}",
        "NODE_COORD_SECTION",
    ]
    # repr() round-trips floats exactly
    lines += [f"{i + 1} {x!r} {y!r}" for i, (x, y) in enumerate(raw.coords)]
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def parse_tour(text: str) -> tuple[str, list[int]]:
    """Parse a TSPLIB ``.tour``/``.opt.tour`` file, returning (name, 0-based order)."""
    header, body = _split_header(text, "TOUR_SECTION")
    dim = _dimension(header) if "DIMENSION" in header else None
    order: list[int] = []
    done = False
    for line_no, line in body:
        for tok in line.split():
            if tok == "EOF":
                done = True
                break
            try:
                node = int(tok)
            except ValueError:
                raise TsplibParseError("non-integer tour entry", line_no, line) from None
            if node == -1:
                done = True
                break
            order.append(node - 1)
        if done:
            break
    if dim is not None and len(order) != dim:
        raise DimensionError(f"tour has {len(order)} nodes, DIMENSION is {dim}")
    if sorted(order) != list(range(len(order))):
        raise TsplibParseError("tour is not a permutation of 1..DIMENSION")
    return header.get("NAME", ""), order


def format_tour(name: str, order: Sequence[int], length: Optional[int] = None) -> str:
    lines = [f"NAME : {name}"]
    if length is not None:
        lines.append(f"COMMENT : Length = {length}")
    lines += ["TYPE : TOUR", f"DIMENSION : {len(order)}", "TOUR_SECTION"]
    lines += [str(int(v) + 1) for v in order]
    lines += ["-1", "EOF"]
    return "\n".join(lines) + "\n"


def read_instance(path: str | Path) -> RawInstance:
    return parse_instance(Path(path).read_text())


def read_tour(path: str | Path) -> list[int]:
    return parse_tour(Path(path).read_text())[1]


# Tour lengths from the published comparison on 48 TSPLIB instances:
# (GRASP-2OPT, FSS-2OPT, GRASP-3OPT, DCTSP, FSS-3OPT, known best).
REFERENCE_RESULTS: dict[str, tuple[int, int, int, int, int, int]] = {
    "eil51": (426, 426, 426, 426, 426, 426),
    "berlin52": (7542, 7542, 7542, 7542, 7542, 7542),
    "pr76": (108351, 108159, 108159, 108159, 108159, 108159),
    "rat99": (1223, 1211, 1211, 1211, 1211, 1211),
    "kroA100": (21282, 21282, 21282, 21282, 21282, 21282),
    "kroB100": (22157, 22141, 22141, 22141, 22141, 22141),
    "kroC100": (20802, 20749, 20749, 20749, 20749, 20749),
    "kroD100": (21468, 21309, 21294, 21294, 21294, 21294),
    "kroE100": (22106, 22100, 22068, 22068, 22068, 22068),
    "rd100": (7960, 7910, 7910, 7910, 7910, 7910),
    "eil101": (638, 629, 629, 629, 629, 629),
    "lin105": (14379, 14379, 14379, 14379, 14379, 14379),
    "pr107": (44394, 44303, 44303, 44303, 44303, 44303),
    "pr124": (59159, 59030, 59030, 59030, 59030, 59030),
    "ch130": (6135, 6110, 6110, 6110, 6110, 6110),
    "pr136": (98614, 96920, 96772, 96772, 96772, 96772),
    "pr144": (58554, 58537, 58537, 58537, 58537, 58537),
    "ch150": (6586, 6549, 6528, 6528, 6528, 6528),
    "kroA150": (26768, 26524, 26524, 26525, 26524, 26524),
    "pr152": (74315, 73682, 73682, 73682, 73682, 73682),
    "rat195": (2391, 2330, 2331, 2323, 2323, 2323),
    "kroA200": (29803, 29368, 29380, 29382, 29368, 29368),
    "kroB200": (29909, 29447, 29482, 29437, 29437, 29437),
    "ts225": (127485, 127301, 126643, 126643, 126643, 126643),
    "pr226": (80714, 80369, 80414, 80369, 80369, 80369),
    "gil262": (2456, 2378, 2385, 2379, 2378, 2378),
    "pr264": (50744, 49135, 49135, 49135, 49135, 49135),
    "a280": (2658, 2584, 2589, 2579, 2579, 2579),
    "pr299": (49522, 48256, 48235, 48207, 48191, 48191),
    "rd400": (15986, 15322, 15385, 15299, 15284, 15281),
    "fl417": (12066, 11883, 11895, 11883, 11871, 11861),
    "pr439": (110564, 107259, 107401, 107303, 107217, 107217),
    "pcb442": (52790, 50945, 50946, 50860, 50846, 50778),
    "d493": (36192, 35055, 35253, 35136, 35018, 35002),
    "rat575": (7143, 6795, 6863, 6814, 6776, 6773),
    "p654": (35113, 34812, 34707, 34658, 34645, 34643),
    "d657": (51226, 49258, 49531, 49110, 49014, 48912),
    "rat783": (9352, 8869, 8897, 8848, 8815, 8806),
    "pr1002": (276251, 264737, 262060, 260218, 259512, 259045),
    "pcb1173": (61210, 57788, 57676, 57061, 56965, 56892),
    "d1291": (54537, 51026, 51616, 51099, 50862, 50801),
    "rl1304": (270441, 255867, 255185, 253842, 253361, 252948),
    "rl1323": (288538, 271837, 273115, 271914, 270678, 270199),
    "fl1400": (21044, 20398, 20310, 20167, 20149, 20127),
    "fl1577": (23274, 22512, 22427, 22352, 22300, 22249),
    "rl1889": (339151, 322883, 319250, 317825, 317801, 316536),
    "d2103": (86179, 81197, 81312, 81078, 80551, 80450),
    "pr2392": (409970, 387169, 386017, 380030, 379307, 378032),
}

REFERENCE_COLUMNS = ("grasp-2opt", "fss-2opt", "grasp-3opt", "dctsp", "fss-3opt")

KNOWN_BEST: dict[str, int] = {name: row[5] for name, row in REFERENCE_RESULTS.items()}


def known_best(name: str) -> Optional[int]:
    return KNOWN_BEST.get(name)


def load_known_best(path: str | Path) -> dict[str, int]:
    """Read ``name value`` pairs (whitespace or comma separated, ``#`` comments)."""
    table: dict[str, int] = {}
    for line_no, line in enumerate(Path(path).read_text().splitlines(), 1):
        s = line.split("#", 1)[0].strip()
        if not s:
            continue
        parts = s.replace(",", " ").split()
        if len(parts) != 2:
            raise TsplibParseError("expected 'name value'", line_no, line)
        try:
            table[parts[0]] = int(parts[1])
        except ValueError:
            raise TsplibParseError("non-integer known-best value", line_no, line) from None
    return table


def bundled_dir() -> Path:
    """Directory of the TSPLIB files shipped with the package."""
    return Path(str(resources.files("fsstsp") / "data" / "tsplib"))


def bundled_instance(name: str) -> RawInstance:
    path = bundled_dir() / f"{name}.tsp"
    if not path.exists():
        raise FileNotFoundError(f"no bundled instance {name!r} ({path})")
    return read_instance(path)


def bundled_opt_tour(name: str) -> Optional[list[int]]:
    path = bundled_dir() / f"{name}.opt.tour"
    return read_tour(path) if path.exists() else None
