"""Python source model: parsing, import resolution, ML-file classification,
and the lightweight variable-role binding the detectors consume.

Everything here is a pure function of the file content; files that fail to
parse raise SyntaxError and are expected to be skipped (and logged) by
corpus-level callers.
"""

from __future__ import annotations

import ast
import posixpath
from dataclasses import dataclass, field
from typing import Iterator

# The file filter is fixed to the four libraries that define an ML-related
# file; callers may widen it explicitly.
ML_LIBRARIES = frozenset({"pandas", "tensorflow", "theano", "torch"})

ROLES = frozenset(
    {"dataframe", "series", "ndarray", "tensor", "optimizer", "model", "estimator", "unknown"}
)

_DATAFRAME_CONSTRUCTORS = {
    "pandas.read_csv",
    "pandas.read_table",
    "pandas.read_json",
    "pandas.DataFrame",
    "pandas.merge",
    "pandas.concat",
}
_SERIES_CONSTRUCTORS = {"pandas.Series"}
_NDARRAY_CONSTRUCTORS = {
    "numpy.array",
    "numpy.asarray",
    "numpy.zeros",
    "numpy.ones",
    "numpy.empty",
    "numpy.arange",
    "numpy.linspace",
}
_TENSOR_CONSTRUCTORS = {
    "torch.tensor",
    "torch.Tensor",
    "torch.zeros",
    "torch.ones",
    "torch.empty",
    "torch.rand",
    "torch.randn",
    "torch.randint",
    "torch.arange",
    "torch.from_numpy",
}
_MODEL_CONSTRUCTOR_PREFIXES = (
    "torch.nn.",
    "tensorflow.keras.Model",
    "tensorflow.keras.Sequential",
    "tensorflow.keras.models.",
    "keras.models.",
    "keras.Model",
    "keras.Sequential",
)

DEFAULT_ESTIMATORS = frozenset(
    {
        "LinearRegression",
        "LogisticRegression",
        "Ridge",
        "Lasso",
        "SVC",
        "SVR",
        "KMeans",
        "DBSCAN",
        "KNeighborsClassifier",
        "KNeighborsRegressor",
        "DecisionTreeClassifier",
        "DecisionTreeRegressor",
        "RandomForestClassifier",
        "RandomForestRegressor",
        "GradientBoostingClassifier",
        "GradientBoostingRegressor",
        "MLPClassifier",
        "MLPRegressor",
        "GaussianNB",
        "XGBClassifier",
        "XGBRegressor",
        "LGBMClassifier",
        "LGBMRegressor",
    }
)


def normalize_path(path: str) -> str:
    """Repo-relative POSIX path with no '.' or '..' segments."""
    norm = posixpath.normpath(path.replace("\\", "/")).lstrip("/")
    if norm.startswith("..") or norm == ".":
        raise ValueError(f"path escapes the repository root: {path!r}")
    return norm


def count_loc(content: str) -> int:
    """Physical lines that are neither blank nor comment-only.

    Stable under trailing newlines and appended blank/comment lines.
    """
    count = 0
    for line in content.splitlines():
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            count += 1
    return count


@dataclass(frozen=True)
class SourceFile:
    path: str
    content: str
    loc: int

    @classmethod
    def from_text(cls, path: str, content: str) -> "SourceFile":
        return cls(path=normalize_path(path), content=content, loc=count_loc(content))


class SyntaxTree:
    """A parsed file: the ast root plus the original source for span lookups.

    Node spans are 1-based lines straight from CPython's parser; snippet()
    reconstructs the verbatim source of any node.
    """

    def __init__(self, path: str, source: str, root: ast.Module) -> None:
        self.path = path
        self.source = source
        self.root = root
        self.lines = source.splitlines()
        self._parents: dict[ast.AST, ast.AST] | None = None

    def walk(self) -> Iterator[ast.AST]:
        return ast.walk(self.root)

    def snippet(self, node: ast.AST) -> str:
        seg = ast.get_source_segment(self.source, node)
        return seg if seg is not None else ""

    def line_text(self, lineno: int) -> str:
        if 1 <= lineno <= len(self.lines):
            return self.lines[lineno - 1]
        return ""

    def parent(self, node: ast.AST) -> ast.AST | None:
        if self._parents is None:
            self._parents = {}
            for parent in ast.walk(self.root):
                for child in ast.iter_child_nodes(parent):
                    self._parents[child] = parent
        return self._parents.get(node)


def parse_source(file: SourceFile) -> SyntaxTree:
    """Parse a SourceFile; raises SyntaxError (with .lineno/.msg) on bad input."""
    root = ast.parse(file.content, filename=file.path)
    return SyntaxTree(path=file.path, source=file.content, root=root)


@dataclass
class ImportTable:
    """alias -> canonical dotted path, plus the set of imported top-level roots."""

    aliases: dict[str, str] = field(default_factory=dict)
    roots: set[str] = field(default_factory=set)

    def resolve(self, dotted: str) -> str:
        """Canonicalize a dotted name by expanding its leading alias."""
        head, _, rest = dotted.partition(".")
        target = self.aliases.get(head)
        if target is None:
            return dotted
        return f"{target}.{rest}" if rest else target


def resolve_imports(tree: SyntaxTree) -> ImportTable:
    """Map every import alias to its canonical library path.

    Star imports record only the root; relative imports are project-internal
    and contribute nothing to the table.
    """
    table = ImportTable()
    for node in tree.walk():
        if isinstance(node, ast.Import):
            for alias in node.names:
                name = alias.name
                bound = alias.asname or name.split(".", 1)[0]
                # `import a.b` binds `a`; `import a.b as c` binds c -> a.b
                table.aliases[bound] = name if alias.asname else name.split(".", 1)[0]
                table.roots.add(name.split(".", 1)[0])
        elif isinstance(node, ast.ImportFrom):
            if node.level or not node.module:
                continue
            table.roots.add(node.module.split(".", 1)[0])
            for alias in node.names:
                if alias.name == "*":
                    continue
                bound = alias.asname or alias.name
                table.aliases[bound] = f"{node.module}.{alias.name}"
    return table


def classify_ml_file(imports: ImportTable, libraries: frozenset[str] = ML_LIBRARIES) -> bool:
    """True iff the file imports one of the ML-defining libraries."""
    return bool(imports.roots & libraries)


@dataclass(frozen=True)
class Binding:
    role: str
    lineno: int


class BindingTable:
    """Variable roles per function scope, seeded by one forward pass.

    Scopes are keyed by the id() of their function node (None for module
    scope); lookups fall back through the lexical chain captured at build
    time. Last assignment in a scope wins.
    """

    def __init__(self) -> None:
        self._scopes: dict[int | None, dict[str, Binding]] = {None: {}}
        self._scope_of: dict[int, int | None] = {}

    def role_of(self, name: str, node: ast.AST | None = None) -> str:
        scope = self._scope_of.get(id(node), None) if node is not None else None
        binding = self._scopes.get(scope, {}).get(name)
        if binding is None and scope is not None:
            binding = self._scopes[None].get(name)
        return binding.role if binding else "unknown"

    def bindings(self, scope: int | None = None) -> dict[str, Binding]:
        return dict(self._scopes.get(scope, {}))

    # -- construction helpers -------------------------------------------------

    def _enter_scope(self, key: int | None, inherited: dict[str, Binding]) -> None:
        self._scopes[key] = dict(inherited)

    def _bind(self, key: int | None, name: str, role: str, lineno: int) -> None:
        self._scopes[key][name] = Binding(role=role, lineno=lineno)

    def _tag(self, node: ast.AST, key: int | None) -> None:
        self._scope_of[id(node)] = key


def _dotted_name(node: ast.AST) -> str | None:
    """Reassemble Name/Attribute chains like torch.optim.SGD; None otherwise."""
    parts: list[str] = []
    while isinstance(node, ast.Attribute):
        parts.append(node.attr)
        node = node.value
    if isinstance(node, ast.Name):
        parts.append(node.id)
        return ".".join(reversed(parts))
    return None


def _root_name(node: ast.AST) -> str | None:
    """The base variable of a subscript/attribute/call chain, if any."""
    while True:
        if isinstance(node, ast.Name):
            return node.id
        if isinstance(node, (ast.Attribute, ast.Subscript)):
            node = node.value
        elif isinstance(node, ast.Call):
            node = node.func
        else:
            return None


def _infer_role(
    value: ast.AST,
    imports: ImportTable,
    current: dict[str, Binding],
    estimators: frozenset[str],
) -> str:
    if isinstance(value, ast.Call):
        dotted = _dotted_name(value.func)
        if dotted is not None:
            canonical = imports.resolve(dotted)
            if canonical in _DATAFRAME_CONSTRUCTORS:
                return "dataframe"
            if canonical in _SERIES_CONSTRUCTORS:
                return "series"
            if canonical in _NDARRAY_CONSTRUCTORS:
                return "ndarray"
            if canonical in _TENSOR_CONSTRUCTORS:
                return "tensor"
            if canonical.startswith("torch.optim."):
                return "optimizer"
            if any(canonical.startswith(p) or canonical == p.rstrip(".") for p in _MODEL_CONSTRUCTOR_PREFIXES):
                return "model"
            if canonical.rsplit(".", 1)[-1] in estimators:
                return "estimator"
        # Method chain on a dataframe variable keeps the dataframe role.
        root = _root_name(value.func)
        if root and current.get(root, Binding("unknown", 0)).role == "dataframe":
            if isinstance(value.func, ast.Attribute):
                return "dataframe"
    elif isinstance(value, ast.Subscript):
        root = _root_name(value)
        if root and current.get(root, Binding("unknown", 0)).role == "dataframe":
            return "dataframe"
    elif isinstance(value, ast.Name):
        existing = current.get(value.id)
        if existing:
            return existing.role
    return "unknown"


def bind_variables(
    tree: SyntaxTree,
    imports: ImportTable,
    estimators: frozenset[str] = DEFAULT_ESTIMATORS,
) -> BindingTable:
    """Heuristic role seeding: single forward pass per scope, no
    interprocedural flow, last assignment wins."""
    table = BindingTable()

    def process(scope_node: ast.AST | None, body: list[ast.stmt], inherited: dict[str, Binding]) -> None:
        key = id(scope_node) if scope_node is not None else None
        table._enter_scope(key, inherited)
        nested: list[ast.AST] = []

        def visit(node: ast.AST) -> None:
            table._tag(node, key)
            if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
                nested.append(node)
                return  # inner scope handled after this pass completes
            if isinstance(node, ast.Assign) and len(node.targets) == 1:
                target = node.targets[0]
                if isinstance(target, ast.Name):
                    role = _infer_role(node.value, imports, table._scopes[key], estimators)
                    table._bind(key, target.id, role, node.lineno)
            elif isinstance(node, ast.AnnAssign) and node.value is not None:
                if isinstance(node.target, ast.Name):
                    role = _infer_role(node.value, imports, table._scopes[key], estimators)
                    table._bind(key, node.target.id, role, node.lineno)
            for child in ast.iter_child_nodes(node):
                visit(child)

        for stmt in body:
            visit(stmt)
        for fn in nested:
            process(fn, fn.body, table._scopes[key])
            table._tag(fn, key)

    process(None, tree.root.body, {})
    return table
