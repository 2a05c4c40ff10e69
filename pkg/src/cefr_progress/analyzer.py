"""Syntactic construct counting for Python source text.

Walks the parse tree of one source file and emits a (kind, line) occurrence
for every construct in the analyzer vocabulary, then folds the cataloged
occurrences into a six-level count vector.  Classification is purely
syntactic: no imports are resolved and no types are inferred.

Counting rules worth knowing (each occurrence is one syntax-tree match):

* Nested constructs all count: an ``if`` inside a ``for`` emits both.
* One node can match several kinds: ``async def`` emits both
  ``function_definition`` and ``async_function``; a ``getattr(...)`` call
  emits both ``function_call`` and ``dynamic_attribute``.
* ``elif`` arms emit ``elif_clause`` instead of ``if_statement``; an
  ``else:`` block that merely contains an ``if`` still counts as
  ``else_clause`` plus ``if_statement``.
* List/tuple displays count only in load context; store-context targets
  count as ``tuple_unpacking`` instead.
* ``closure`` uses the compiler's own scoping rules (symtable): an inner
  def/lambda counts when it has at least one free variable.
* Class-protocol kinds (``context_manager_definition``,
  ``descriptor_definition``, ``dunder_new_override``, ``metaclass``)
  anchor at the class statement's line.

Source that does not compile under the running Python 3 grammar yields
``parse_ok=False`` and an all-zero vector; the pipeline never aborts on it.
"""

from __future__ import annotations

import ast
import logging
import symtable
from dataclasses import dataclass

from .catalog import Catalog, Level

log = logging.getLogger(__name__)

Occurrence = tuple[str, int]

#: Every construct kind count_constructs can emit.
KIND_VOCABULARY = frozenset({
    "simple_assignment", "if_statement", "for_statement", "while_statement",
    "function_definition", "function_call", "import_statement", "return_statement",
    "arithmetic_expression", "comparison_expression", "list_literal",
    "nested_list", "dict_literal", "set_literal", "tuple_literal",
    "elif_clause", "else_clause", "string_formatting", "default_parameter",
    "tuple_unpacking", "slice_expression", "augmented_assignment",
    "break_statement", "continue_statement", "try_except", "with_statement",
    "lambda_expression", "class_definition", "star_args_parameter",
    "kw_args_parameter", "raise_statement", "global_declaration", "nonlocal_declaration",
    "list_comprehension", "dict_comprehension", "set_comprehension",
    "generator_expression", "decorator_application", "class_inheritance",
    "conditional_expression", "assert_statement",
    "generator_function", "yield_from", "closure", "property_definition",
    "context_manager_definition", "multiple_inheritance",
    "metaclass", "descriptor_definition", "async_function", "await_expression",
    "dynamic_attribute", "dunder_new_override",
})


class ParseError(Exception):
    """Source text does not compile under the running Python grammar."""


@dataclass(frozen=True)
class LevelVector:
    """Six non-negative construct counts indexed by Level (A1..C2)."""

    counts: tuple[int, int, int, int, int, int] = (0, 0, 0, 0, 0, 0)

    def __post_init__(self) -> None:
        if len(self.counts) != 6:
            raise ValueError("LevelVector needs exactly six counts")
        if any(c < 0 for c in self.counts):
            raise ValueError(f"negative count in {self.counts}")

    @classmethod
    def zero(cls) -> "LevelVector":
        return cls()

    def __add__(self, other: "LevelVector") -> "LevelVector":
        a, b = self.counts, other.counts
        return LevelVector(tuple(a[i] + b[i] for i in range(6)))

    def __getitem__(self, level: Level) -> int:
        return self.counts[level]

    def total(self) -> int:
        return sum(self.counts)

    def c1_plus_c2(self) -> int:
        return self.counts[Level.C1] + self.counts[Level.C2]

    def as_list(self) -> list[int]:
        return list(self.counts)


@dataclass(frozen=True)
class AnalysisResult:
    """Outcome of analyzing one source text against a catalog."""

    vector: LevelVector
    occurrences: tuple[Occurrence, ...]
    unclassified_count: int
    parse_ok: bool


_ARITHMETIC_OPS = (ast.Add, ast.Sub, ast.Mult, ast.MatMult, ast.Div, ast.Mod, ast.Pow, ast.FloorDiv)
_CM_PAIRS = (("__enter__", "__exit__"), ("__aenter__", "__aexit__"))
_DESCRIPTOR_DUNDERS = {"__get__", "__set__", "__delete__"}
_PROPERTY_ATTRS = {"setter", "getter", "deleter"}


def _has_own_yield(func: ast.FunctionDef | ast.AsyncFunctionDef) -> bool:
    """True when the function's own body (not nested defs) contains a yield."""
    stack: list[ast.AST] = list(func.body)
    while stack:
        node = stack.pop()
        if isinstance(node, (ast.Yield, ast.YieldFrom)):
            return True
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef, ast.Lambda)):
            continue
        stack.extend(ast.iter_child_nodes(node))
    return False


def _subscript_uses_slice(node: ast.Subscript) -> bool:
    sl = node.slice
    if isinstance(sl, ast.Slice):
        return True
    return isinstance(sl, ast.Tuple) and any(isinstance(e, ast.Slice) for e in sl.elts)


class _ConstructCollector(ast.NodeVisitor):
    """Accumulates (kind, line) pairs over one parse tree."""

    def __init__(self) -> None:
        self.found: list[Occurrence] = []
        self._elif_nodes: set[int] = set()

    def emit(self, kind: str, node: ast.AST) -> None:
        self.found.append((kind, node.lineno))

    # -- statements ---------------------------------------------------

    def visit_Assign(self, node: ast.Assign) -> None:
        self.emit("simple_assignment", node)
        for target in node.targets:
            if isinstance(target, (ast.Tuple, ast.List)):
                self.emit("tuple_unpacking", target)
        self.generic_visit(node)

    def visit_AnnAssign(self, node: ast.AnnAssign) -> None:
        # bare annotations (x: int) declare without assigning
        if node.value is not None:
            self.emit("simple_assignment", node)
        self.generic_visit(node)

    def visit_AugAssign(self, node: ast.AugAssign) -> None:
        self.emit("augmented_assignment", node)
        self.generic_visit(node)

    def visit_If(self, node: ast.If) -> None:
        if id(node) in self._elif_nodes:
            self.emit("elif_clause", node)
        else:
            self.emit("if_statement", node)
        if node.orelse:
            first = node.orelse[0]
            # an elif is the sole If in orelse sharing the parent's column
            if (len(node.orelse) == 1 and isinstance(first, ast.If)
                    and first.col_offset == node.col_offset):
                self._elif_nodes.add(id(first))
            else:
                self.emit("else_clause", first)
        self.generic_visit(node)

    def _loop_common(self, node: ast.For | ast.AsyncFor | ast.While) -> None:
        if node.orelse:
            self.emit("else_clause", node.orelse[0])
        self.generic_visit(node)

    def visit_For(self, node: ast.For) -> None:
        self.emit("for_statement", node)
        if isinstance(node.target, (ast.Tuple, ast.List)):
            self.emit("tuple_unpacking", node.target)
        self._loop_common(node)

    visit_AsyncFor = visit_For

    def visit_While(self, node: ast.While) -> None:
        self.emit("while_statement", node)
        self._loop_common(node)

    def _visit_callable_def(self, node: ast.FunctionDef | ast.AsyncFunctionDef | ast.Lambda) -> None:
        args = node.args
        for default in list(args.defaults) + [d for d in args.kw_defaults if d is not None]:
            self.emit("default_parameter", default)
        if args.vararg is not None:
            self.emit("star_args_parameter", node)
        if args.kwarg is not None:
            self.emit("kw_args_parameter", node)

    def _visit_funcdef(self, node: ast.FunctionDef | ast.AsyncFunctionDef) -> None:
        self.emit("function_definition", node)
        if isinstance(node, ast.AsyncFunctionDef):
            self.emit("async_function", node)
        if _has_own_yield(node):
            self.emit("generator_function", node)
        for dec in node.decorator_list:
            self.emit("decorator_application", dec)
            if isinstance(dec, ast.Name) and dec.id == "property":
                self.emit("property_definition", node)
            elif isinstance(dec, ast.Attribute) and dec.attr in _PROPERTY_ATTRS:
                self.emit("property_definition", node)
        self._visit_callable_def(node)
        self.generic_visit(node)

    visit_FunctionDef = _visit_funcdef
    visit_AsyncFunctionDef = _visit_funcdef

    def visit_Lambda(self, node: ast.Lambda) -> None:
        self.emit("lambda_expression", node)
        self._visit_callable_def(node)
        self.generic_visit(node)

    def visit_ClassDef(self, node: ast.ClassDef) -> None:
        self.emit("class_definition", node)
        for dec in node.decorator_list:
            self.emit("decorator_application", dec)
        if node.bases:
            self.emit("class_inheritance", node)
        if len(node.bases) >= 2:
            self.emit("multiple_inheritance", node)
        if (any(kw.arg == "metaclass" for kw in node.keywords)
                or any(isinstance(b, ast.Name) and b.id == "type" for b in node.bases)):
            self.emit("metaclass", node)
        methods = {stmt.name for stmt in node.body
                   if isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef))}
        if any(enter in methods and exit_ in methods for enter, exit_ in _CM_PAIRS):
            self.emit("context_manager_definition", node)
        if methods & _DESCRIPTOR_DUNDERS:
            self.emit("descriptor_definition", node)
        if "__new__" in methods:
            self.emit("dunder_new_override", node)
        self.generic_visit(node)

    def visit_Import(self, node: ast.Import) -> None:
        self.emit("import_statement", node)

    def visit_ImportFrom(self, node: ast.ImportFrom) -> None:
        self.emit("import_statement", node)

    def visit_Return(self, node: ast.Return) -> None:
        self.emit("return_statement", node)
        self.generic_visit(node)

    def visit_Break(self, node: ast.Break) -> None:
        self.emit("break_statement", node)

    def visit_Continue(self, node: ast.Continue) -> None:
        self.emit("continue_statement", node)

    def visit_Try(self, node: ast.Try) -> None:
        self.emit("try_except", node)
        if node.orelse:
            self.emit("else_clause", node.orelse[0])
        self.generic_visit(node)

    visit_TryStar = visit_Try  # except* groups, when the grammar has them

    def visit_With(self, node: ast.With | ast.AsyncWith) -> None:
        self.emit("with_statement", node)
        for item in node.items:
            if isinstance(item.optional_vars, (ast.Tuple, ast.List)):
                self.emit("tuple_unpacking", item.optional_vars)
        self.generic_visit(node)

    visit_AsyncWith = visit_With

    def visit_Raise(self, node: ast.Raise) -> None:
        self.emit("raise_statement", node)
        self.generic_visit(node)

    def visit_Global(self, node: ast.Global) -> None:
        self.emit("global_declaration", node)

    def visit_Nonlocal(self, node: ast.Nonlocal) -> None:
        self.emit("nonlocal_declaration", node)

    def visit_Assert(self, node: ast.Assert) -> None:
        self.emit("assert_statement", node)
        self.generic_visit(node)

    # -- expressions --------------------------------------------------

    def visit_Call(self, node: ast.Call) -> None:
        self.emit("function_call", node)
        if isinstance(node.func, ast.Name) and node.func.id in ("getattr", "setattr"):
            self.emit("dynamic_attribute", node)
        if isinstance(node.func, ast.Attribute) and node.func.attr == "format":
            self.emit("string_formatting", node)
        self.generic_visit(node)

    def visit_JoinedStr(self, node: ast.JoinedStr) -> None:
        self.emit("string_formatting", node)
        self.generic_visit(node)

    def visit_BinOp(self, node: ast.BinOp) -> None:
        if isinstance(node.op, _ARITHMETIC_OPS):
            self.emit("arithmetic_expression", node)
        self.generic_visit(node)

    def visit_Compare(self, node: ast.Compare) -> None:
        self.emit("comparison_expression", node)
        self.generic_visit(node)

    def visit_List(self, node: ast.List) -> None:
        if isinstance(node.ctx, ast.Load):
            self.emit("list_literal", node)
            if any(isinstance(e, ast.List) for e in node.elts):
                self.emit("nested_list", node)
        self.generic_visit(node)

    def visit_Tuple(self, node: ast.Tuple) -> None:
        if isinstance(node.ctx, ast.Load):
            self.emit("tuple_literal", node)
        self.generic_visit(node)

    def visit_Dict(self, node: ast.Dict) -> None:
        self.emit("dict_literal", node)
        self.generic_visit(node)

    def visit_Set(self, node: ast.Set) -> None:
        self.emit("set_literal", node)
        self.generic_visit(node)

    def visit_Subscript(self, node: ast.Subscript) -> None:
        if _subscript_uses_slice(node):
            self.emit("slice_expression", node)
        self.generic_visit(node)

    def visit_ListComp(self, node: ast.ListComp) -> None:
        self.emit("list_comprehension", node)
        self.generic_visit(node)

    def visit_DictComp(self, node: ast.DictComp) -> None:
        self.emit("dict_comprehension", node)
        self.generic_visit(node)

    def visit_SetComp(self, node: ast.SetComp) -> None:
        self.emit("set_comprehension", node)
        self.generic_visit(node)

    def visit_GeneratorExp(self, node: ast.GeneratorExp) -> None:
        self.emit("generator_expression", node)
        self.generic_visit(node)

    def visit_comprehension(self, node: ast.comprehension) -> None:
        if isinstance(node.target, (ast.Tuple, ast.List)):
            self.emit("tuple_unpacking", node.target)
        self.generic_visit(node)

    def visit_IfExp(self, node: ast.IfExp) -> None:
        self.emit("conditional_expression", node)
        self.generic_visit(node)

    def visit_YieldFrom(self, node: ast.YieldFrom) -> None:
        self.emit("yield_from", node)
        self.generic_visit(node)

    def visit_Await(self, node: ast.Await) -> None:
        self.emit("await_expression", node)
        self.generic_visit(node)


def _closure_occurrences(source: str, tree: ast.Module) -> list[Occurrence]:
    """Defs/lambdas with free variables, located via the compiler's symbol tables.

    Matching symtable blocks back to def/lambda nodes by (name, line) keeps
    comprehension scopes (which also appear as function blocks) out of the
    count.
    """
    defs: set[tuple[str, int]] = set()
    for node in ast.walk(tree):
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            defs.add((node.name, node.lineno))
        elif isinstance(node, ast.Lambda):
            defs.add(("lambda", node.lineno))
    if not defs:
        return []

    table = symtable.symtable(source, "<analysis>", "exec")
    found: list[Occurrence] = []
    stack = [table]
    while stack:
        block = stack.pop()
        stack.extend(block.get_children())
        if (isinstance(block, symtable.Function)
                and (block.get_name(), block.get_lineno()) in defs):
            # __class__ is the implicit cell behind zero-argument super(),
            # not a user capture
            frees = set(block.get_frees()) - {"__class__"}
            if frees:
                found.append(("closure", block.get_lineno()))
    return found


def count_constructs(source: str) -> list[Occurrence]:
    """All vocabulary construct occurrences in the source, sorted by (line, kind).

    Raises ParseError when the text does not compile.
    """
    try:
        tree = ast.parse(source)
        closures = _closure_occurrences(source, tree)
    except (SyntaxError, ValueError) as exc:
        # symtable rejects a little more than ast.parse (e.g. unbound
        # nonlocal); either way the compiler refuses this source
        raise ParseError(str(exc)) from exc
    collector = _ConstructCollector()
    collector.visit(tree)
    return sorted(collector.found + closures, key=lambda occ: (occ[1], occ[0]))


def analyze_source(source: str, catalog: Catalog) -> AnalysisResult:
    """Classify one source text; parse failures yield a zero result, never an error."""
    try:
        occurrences = count_constructs(source)
    except ParseError as exc:
        log.debug("parse failure: %s", exc)
        return AnalysisResult(LevelVector.zero(), (), 0, parse_ok=False)

    counts = [0] * 6
    unclassified = 0
    for kind, _line in occurrences:
        level = catalog.classify(kind)
        if level is None:
            unclassified += 1
        else:
            counts[level] += 1
    return AnalysisResult(LevelVector(tuple(counts)), tuple(occurrences), unclassified, parse_ok=True)
