"""
Text formats of the workbench.

Everything exact is written as text with rationals in the form
``[-]num[/den]``, reduced and with a positive denominator, so that printing a
parsed file gives back the same bytes. ``write_off`` is the one lossy format.
"""
import json
import logging
import re
from collections import defaultdict
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import networkx as nx

from gadgets.cupola import CHAIN_KEYS, CupolaRecord
from gadgets.frames import Cone3, SchonhardtFrame
from geometry.exceptions import GeometryError
from geometry.kernel import Plane, Point3
from geometry.polytope import Polytope3
from geometry.triangulation import Triangulation, tetra
from reduction.cnf import CnfFormula, RestrictedFormula
from reduction.construction import ROOF_ROLES, Layout, LogicalPolytope
from reduction.params import default_chain_length, params

from .exceptions import DimacsSyntaxError, FileFormatError, HeaderMismatch, TautologicalClause

logger = logging.getLogger(__name__)

RATIONAL = re.compile(r'-?\d+(/\d+)?')
SLOT_NAMES = {'x1': '1', 'x2': '2', 'x3bar': '3bar'}
SLOTS_BY_NAME = {name: slot for slot, name in SLOT_NAMES.items()}
CUPOLA_KINDS = ('var', 'clause')

FORMULA_FILE = 'formula.cnf'
POLYTOPE_FILE = 'polytope.poly'
ROLES_FILE = 'roles.txt'
PARAMS_FILE = 'params.json'


def format_rational(q):
    return str(Fraction(q))


def parse_rational(token, line=None):
    if not RATIONAL.fullmatch(token):
        raise FileFormatError(f"{token!r} is not a rational", line)
    try:
        value = Fraction(token)
    except ZeroDivisionError:
        raise FileFormatError(f"{token!r} has a zero denominator", line) from None
    if format_rational(value) != token:
        raise FileFormatError(f"{token!r} is not in lowest terms", line)
    return value


def _int(token, line):
    try:
        return int(token)
    except ValueError:
        raise FileFormatError(f"{token!r} is not an integer", line) from None


def _records(text):
    """(line number, tokens) for every non-blank line"""
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if tokens:
            yield number, tokens


def _header(records, keyword, count):
    try:
        number, tokens = next(records)
    except StopIteration:
        raise FileFormatError(f"missing '{keyword}' header") from None
    if tokens[0] != keyword or len(tokens) != count + 1:
        raise FileFormatError(f"expected a '{keyword}' header with {count} numbers", number)
    return [_int(t, number) for t in tokens[1:]]


def _expect_end(records):
    for number, _ in records:
        raise FileFormatError("unexpected records after the last one announced by the header", number)


# Polytopes

def dump_polytope(P):
    lines = [f"polytope3 {P.n} {len(P.facets)}"]
    for p in P.vertices:
        lines.append("v " + " ".join(format_rational(c) for c in p))
    for cycle in P.facets:
        lines.append(f"f {len(cycle)} " + " ".join(str(i) for i in cycle))
    return "\n".join(lines) + "\n"


def load_polytope(text):
    records = _records(text)
    nv, nf = _header(records, 'polytope3', 2)
    vertices, facets = [], []
    for _ in range(nv):
        number, tokens = next(records, (None, None))
        if tokens is None or tokens[0] != 'v' or len(tokens) != 4:
            raise FileFormatError(f"expected {nv} 'v x y z' records", number)
        vertices.append(Point3(*(parse_rational(t, number) for t in tokens[1:])))
    for _ in range(nf):
        number, tokens = next(records, (None, None))
        if tokens is None or tokens[0] != 'f' or len(tokens) < 2:
            raise FileFormatError(f"expected {nf} 'f k i1 .. ik' records", number)
        k = _int(tokens[1], number)
        cycle = [_int(t, number) for t in tokens[2:]]
        if k < 3 or len(cycle) != k:
            raise FileFormatError(f"facet announces {k} vertices and lists {len(cycle)}", number)
        if len(set(cycle)) != k or not all(0 <= i < nv for i in cycle):
            raise FileFormatError(f"facet {cycle} repeats a vertex or leaves 0..{nv - 1}", number)
        facets.append(tuple(cycle))
    _expect_end(records)
    try:
        return Polytope3(vertices, facets)
    except GeometryError as e:
        raise FileFormatError(f"facets do not describe a polytope: {e}") from e


def write_off(P):
    """Float OFF dump for mesh viewers; lossy, never read back"""
    lines = ["OFF", f"{P.n} {len(P.facets)} 0"]
    for p in P.vertices:
        lines.append(" ".join(repr(float(c)) for c in p))
    for cycle in P.facets:
        lines.append(f"{len(cycle)} " + " ".join(str(i) for i in cycle))
    return "\n".join(lines) + "\n"


# Triangulations

def dump_triangulation(T):
    tetras = sorted(T.tetras)
    lines = [f"triangulation {len(tetras)}"]
    lines.extend("t " + " ".join(str(i) for i in t) for t in tetras)
    return "\n".join(lines) + "\n"


def load_triangulation(text, P):
    records = _records(text)
    (nt,) = _header(records, 'triangulation', 1)
    tetras = []
    for _ in range(nt):
        number, tokens = next(records, (None, None))
        if tokens is None or tokens[0] != 't' or len(tokens) != 5:
            raise FileFormatError(f"expected {nt} 't i j k l' records", number)
        indices = [_int(t, number) for t in tokens[1:]]
        if indices != sorted(indices) or len(set(indices)) != 4:
            raise FileFormatError(f"tetrahedron {indices} is not four sorted distinct indices", number)
        if not all(0 <= i < P.n for i in indices):
            raise FileFormatError(f"tetrahedron {indices} leaves 0..{P.n - 1}", number)
        tetras.append(tetra(*indices))
    _expect_end(records)
    T = Triangulation(P, frozenset(tetras))
    if len(T) != len(tetras):
        raise FileFormatError(f"{len(tetras) - len(T)} tetrahedra are listed twice")
    return T


# Graphs

def dump_edge_list(g):
    edges = sorted((min(u, v), max(u, v)) for u, v in g.edges)
    lines = [f"graph {g.number_of_nodes()} {len(edges)}"]
    lines.extend(f"e {u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def load_edge_list(text):
    records = _records(text)
    n, e = _header(records, 'graph', 2)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for _ in range(e):
        number, tokens = next(records, (None, None))
        if tokens is None or tokens[0] != 'e' or len(tokens) != 3:
            raise FileFormatError(f"expected {e} 'e i j' records", number)
        u, v = _int(tokens[1], number), _int(tokens[2], number)
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise FileFormatError(f"edge ({u}, {v}) is a loop or leaves 0..{n - 1}", number)
        if g.has_edge(u, v):
            raise FileFormatError(f"edge ({u}, {v}) is listed twice", number)
        g.add_edge(u, v)
    _expect_end(records)
    return g


def load_graph(text):
    """Skeleton of a polytope file, or the graph of an edge-list file"""
    first = next(_records(text), (None, ['']))[1][0]
    if first == 'polytope3':
        return load_polytope(text).skeleton()
    if first == 'graph':
        return load_edge_list(text)
    raise FileFormatError(f"expected a polytope or an edge list, found {first!r}")


# DIMACS

def parse_dimacs(text):
    """
    Read a DIMACS CNF formula. Clauses end with 0 and may span lines;
    repeated literals inside a clause are collapsed.
    """
    header = None
    clauses, current, start = [], [], None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('c'):
            continue
        if line.startswith('%'):
            break
        if line.startswith('p'):
            tokens = line.split()
            if header is not None:
                raise DimacsSyntaxError("second 'p' line", number)
            if len(tokens) != 4 or tokens[1] != 'cnf':
                raise DimacsSyntaxError("expected 'p cnf <variables> <clauses>'", number)
            try:
                header = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise DimacsSyntaxError("header counts are not integers", number) from None
            if min(header) < 0:
                raise DimacsSyntaxError("header counts are negative", number)
            continue
        if header is None:
            raise DimacsSyntaxError("clause before the 'p cnf' header", number)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsSyntaxError(f"{token!r} is not a literal", number) from None
            if start is None:
                start = number
            if lit == 0:
                clause = tuple(dict.fromkeys(current))
                if any(-x in clause for x in clause):
                    raise TautologicalClause(f"clause {clause} contains a literal and its negation", start)
                clauses.append(clause)
                current, start = [], None
                continue
            if abs(lit) > header[0]:
                raise HeaderMismatch(f"literal {lit} exceeds the {header[0]} declared variables", number)
            current.append(lit)
    if header is None:
        raise DimacsSyntaxError("missing 'p cnf' header")
    if current:
        raise DimacsSyntaxError("last clause is not terminated by 0", start)
    if len(clauses) != header[1]:
        raise HeaderMismatch(f"header declares {header[1]} clauses, found {len(clauses)}")
    logger.debug("parsed DIMACS formula: %d variables, %d clauses", *header)
    return CnfFormula(variables=header[0], clauses=tuple(clauses))


# Role maps

def dump_role_map(lp):
    lines = [f"param {name} {getattr(lp.params, name)}" for name in ('C', 'V', 'm', 'K')]
    lines.extend(f"spine {j} {idx}" for j, idx in enumerate(lp.spine))
    for i in range(1, lp.V + 1):
        roof = lp.roof(i)
        lines.extend(f"roof {i} {role} {roof[role]}" for role in ROOF_ROLES)
    for i in range(1, lp.V + 1):
        for slot, idx in lp.literals(i).items():
            lines.append(f"literal {i} {SLOT_NAMES[slot]} {idx} clause {lp.literal_clause(i, slot)}")
    for kind, records in zip(CUPOLA_KINDS, (lp.variable_cupolas, lp.clause_cupolas)):
        for number, rec in enumerate(records, start=1):
            head = f"cupola {kind} {number} skylight {' '.join(map(str, rec.skylight))} " \
                   f"bottom {' '.join(map(str, rec.bottom))}"
            for i, j in CHAIN_KEYS:
                lines.append(f"{head} chain {i},{j} " + " ".join(map(str, rec.chains[(i, j)])))
            for plane in rec.cone.planes:
                coeffs = " ".join(format_rational(c) for c in (*plane.a, plane.b))
                lines.append(f"cone {kind} {number} plane {coeffs}")
            lines.append(f"host {kind} {number} " + " ".join(map(str, rec.host)))
    lines.extend(f"constant {name} {format_rational(value)}" for name, value in sorted(lp.constants.items()))
    return "\n".join(lines) + "\n"


class _RoleMapReader:
    def __init__(self, formula, P):
        self.formula = formula
        self.P = P
        self.found = {}
        self.cupolas = defaultdict(dict)
        self.constants = {}

    def index(self, token, line):
        idx = _int(token, line)
        if not 0 <= idx < self.P.n:
            raise FileFormatError(f"vertex {idx} leaves 0..{self.P.n - 1}", line)
        return idx

    def indices(self, tokens, line):
        return tuple(self.index(t, line) for t in tokens)

    def cupola(self, kind, number, line):
        if kind not in CUPOLA_KINDS:
            raise FileFormatError(f"cupola kind must be var or clause, got {kind!r}", line)
        return self.cupolas[kind].setdefault(_int(number, line), {'chains': {}, 'planes': []})

    def read(self, text):
        for line, tokens in _records(text):
            kind, args = tokens[0], tokens[1:]
            handler = getattr(self, f"_read_{kind}", None)
            if handler is None:
                raise FileFormatError(f"unknown record {kind!r}", line)
            try:
                handler(args, line)
            except (IndexError, ValueError):
                raise FileFormatError(f"malformed {kind} record", line) from None

    def _expect(self, key, value, line):
        if self.found.setdefault(key, value) != value:
            raise FileFormatError(f"{key} recorded twice with different values", line)

    def _read_param(self, args, line):
        name, value = args
        if name not in ('C', 'V', 'm', 'K'):
            raise FileFormatError(f"unknown parameter {name!r}", line)
        self._expect(('param', name), _int(value, line), line)

    def _read_spine(self, args, line):
        j, idx = args
        self._expect(('spine', _int(j, line)), self.index(idx, line), line)

    def _read_roof(self, args, line):
        i, role, idx = args
        if role not in ROOF_ROLES:
            raise FileFormatError(f"unknown roof role {role!r}", line)
        self._expect(('roof', _int(i, line), role), self.index(idx, line), line)

    def _read_literal(self, args, line):
        i, name, idx, word, clause = args
        if name not in SLOTS_BY_NAME or word != 'clause':
            raise FileFormatError("expected 'literal <i> <1|2|3bar> <idx> clause <l>'", line)
        self._expect(('literal', _int(i, line), SLOTS_BY_NAME[name]),
                     (self.index(idx, line), _int(clause, line)), line)

    def _read_cupola(self, args, line):
        kind, number = args[0], args[1]
        if args[2] != 'skylight' or args[6] != 'bottom' or args[10] != 'chain':
            raise FileFormatError("expected 'cupola <kind> <i> skylight .. bottom .. chain <i,j> ..'", line)
        entry = self.cupola(kind, number, line)
        for key, tokens in (('skylight', args[3:6]), ('bottom', args[7:10])):
            if entry.setdefault(key, self.indices(tokens, line)) != self.indices(tokens, line):
                raise FileFormatError(f"{kind} cupola {number} changes its {key}", line)
        key = tuple(int(t) for t in args[11].split(','))
        if key not in CHAIN_KEYS or key in entry['chains']:
            raise FileFormatError(f"chain {args[11]} is unknown or repeated", line)
        entry['chains'][key] = self.indices(args[12:], line)

    def _read_cone(self, args, line):
        kind, number, word, *coeffs = args
        if word != 'plane' or len(coeffs) != 4:
            raise FileFormatError("expected 'cone <kind> <i> plane a1 a2 a3 b'", line)
        a1, a2, a3, b = (parse_rational(c, line) for c in coeffs)
        self.cupola(kind, number, line)['planes'].append(Plane(Point3(a1, a2, a3), b))

    def _read_host(self, args, line):
        kind, number, *rest = args
        self.cupola(kind, number, line)['host'] = self.indices(rest, line)

    def _read_constant(self, args, line):
        name, value = args
        self.constants[name] = parse_rational(value, line)

    def record(self, kind, number, m):
        entry = self.cupolas[kind].get(number)
        if entry is None or set(entry['chains']) != set(CHAIN_KEYS) or len(entry['planes']) != 3 \
                or 'host' not in entry:
            raise FileFormatError(f"{kind} cupola {number} is incomplete")
        bottom, skylight = entry['bottom'], entry['skylight']
        for chain in entry['chains'].values():
            if len(chain) != m + 2:
                raise FileFormatError(f"{kind} cupola {number} has a chain of length {len(chain) - 2}, not {m}")
        frame = SchonhardtFrame.of([self.P.vertices[i] for i in bottom + skylight])
        return CupolaRecord(
            frame=frame,
            m=m,
            bottom=bottom,
            skylight=skylight,
            chains={key: entry['chains'][key] for key in CHAIN_KEYS},
            cone=Cone3(tuple(entry['planes'])),
            host=entry['host'],
        )


def _check_layout(found, layout, formula):
    """The base records must agree with the numbering the formula implies"""
    expected = {('spine', j): j for j in range(2 * layout.C + 1)}
    for i in range(1, layout.V + 1):
        expected.update({('roof', i, role): idx for role, idx in layout.roof(i).items()})
        for (slot, idx), clause in zip(layout.literals(i).items(), formula.literal_clauses(i)):
            expected[('literal', i, slot)] = (idx, clause)
    base = {key: value for key, value in found.items() if key[0] != 'param'}
    if base != expected:
        missing = sorted(set(expected) - set(base), key=str)
        wrong = sorted((k for k in base if expected.get(k) != base[k]), key=str)
        raise FileFormatError(f"base roles disagree with the layout: missing {missing[:3]}, wrong {wrong[:3]}")


def _check_partition(lp):
    covered = list(range(lp.layout.size))
    for rec in (*lp.variable_cupolas, *lp.clause_cupolas):
        covered.extend(rec.vertices())
        if min(rec.vertices()) < lp.layout.size:
            raise FileFormatError("a cupola claims a base vertex")
    if sorted(covered) != list(range(lp.polytope.n)):
        raise FileFormatError("roles do not partition the vertex set")


def load_role_map(text, formula, P):
    """Rebuild the logical polytope of ``formula`` on the vertices of P"""
    reader = _RoleMapReader(formula, P)
    reader.read(text)
    found = reader.found
    try:
        C, V, m, K = (found[('param', name)] for name in ('C', 'V', 'm', 'K'))
    except KeyError as e:
        raise FileFormatError(f"missing parameter {e.args[0][1]}") from None
    if (C, V) != (formula.C, formula.V):
        raise FileFormatError(f"role map is for C={C}, V={V}, the formula has C={formula.C}, V={formula.V}")
    prm = replace(params(C, V, chain_length=m), chain_override=m != default_chain_length(C, V))
    if prm.K != K or prm.n != P.n:
        raise FileFormatError(f"K={K} and n={P.n} do not follow from C={C}, V={V}, m={m}")
    layout = Layout(C, V)
    _check_layout(found, layout, formula)
    lp = LogicalPolytope(
        formula=formula,
        params=prm,
        polytope=P,
        layout=layout,
        variable_cupolas=tuple(reader.record('var', i, m) for i in range(1, V + 1)),
        clause_cupolas=tuple(reader.record('clause', l, m) for l in range(1, C + 1)),
        constants=reader.constants,
    )
    if len(reader.cupolas['var']) != V or len(reader.cupolas['clause']) != C:
        raise FileFormatError("role map lists cupolas beyond the formula")
    _check_partition(lp)
    return lp


# Build directories

def save_build(lp, directory):
    """Write the formula, polytope, role map and parameters of a build"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / FORMULA_FILE).write_text(lp.formula.as_dimacs())
    (directory / POLYTOPE_FILE).write_text(dump_polytope(lp.polytope))
    (directory / ROLES_FILE).write_text(dump_role_map(lp))
    summary = {
        **lp.params.as_dict(),
        'sweep_bound': lp.params.sweep_bound,
        'origin': [list(pair) for pair in lp.formula.origin],
    }
    (directory / PARAMS_FILE).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    logger.info("build written to %s (n=%d)", directory, lp.polytope.n)
    return directory


def load_build(directory):
    directory = Path(directory)
    try:
        cnf = parse_dimacs((directory / FORMULA_FILE).read_text())
        P = load_polytope((directory / POLYTOPE_FILE).read_text())
        roles = (directory / ROLES_FILE).read_text()
        summary = json.loads((directory / PARAMS_FILE).read_text())
    except OSError as e:
        raise FileFormatError(f"incomplete build directory {directory}: {e}") from e
    origin = tuple((old, flipped) for old, flipped in summary.get('origin', ()))
    formula = RestrictedFormula(cnf.variables, cnf.clauses, origin=origin)
    return load_role_map(roles, formula, P)
