"""Rule implementations for the 14 smell kinds.

Each rule receives a RuleContext and yields hit nodes (or HIT_FILE for
file-scope kinds). Rules are pure; the engine turns hits into instances,
anchors them to source lines, and catches rule crashes.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from typing import Callable, Iterable

from mlsmells.detectors.config import DetectorConfig
from mlsmells.pysource import BindingTable, ImportTable, SyntaxTree, _dotted_name, _root_name

LOOP_NODES = (ast.For, ast.AsyncFor, ast.While)

# sentinel for file-scope hits (anchored at line 1 by the engine)
HIT_FILE = object()

_NAN_NAMES = {"numpy.nan", "numpy.NaN", "numpy.NAN"}


@dataclass
class RuleContext:
    tree: SyntaxTree
    imports: ImportTable
    bindings: BindingTable
    config: DetectorConfig

    def canonical(self, node: ast.AST) -> str | None:
        dotted = _dotted_name(node)
        return self.imports.resolve(dotted) if dotted else None

    def role(self, node: ast.AST) -> str:
        """Role of the variable a Name/chain is rooted at."""
        root = _root_name(node)
        return self.bindings.role_of(root, node) if root else "unknown"

    def calls(self) -> Iterable[ast.Call]:
        for node in self.tree.walk():
            if isinstance(node, ast.Call):
                yield node

    def enclosing_loop(self, node: ast.AST) -> ast.AST | None:
        cur = self.tree.parent(node)
        while cur is not None:
            if isinstance(cur, LOOP_NODES):
                return cur
            cur = self.tree.parent(cur)
        return None


def _pos(node: ast.AST) -> tuple[int, int]:
    return (node.lineno, node.col_offset)


def _loop_target_names(loop: ast.For | ast.AsyncFor) -> set[str]:
    names: set[str] = set()
    for sub in ast.walk(loop.target):
        if isinstance(sub, ast.Name):
            names.add(sub.id)
    return names


def rule_unnecessary_iteration(ctx: RuleContext) -> list[ast.AST]:
    hits: list[ast.AST] = []
    for node in ctx.tree.walk():
        if not isinstance(node, LOOP_NODES):
            continue
        hit: ast.AST | None = None
        if isinstance(node, (ast.For, ast.AsyncFor)):
            it = node.iter
            if (
                isinstance(it, ast.Call)
                and isinstance(it.func, ast.Attribute)
                and it.func.attr in ("iterrows", "itertuples")
                and ctx.role(it.func.value) == "dataframe"
            ):
                hit = it
            else:
                targets = _loop_target_names(node)
                for sub in ast.walk(node):
                    if (
                        isinstance(sub, ast.Subscript)
                        and ctx.role(sub.value) in ("dataframe", "tensor")
                        and any(
                            isinstance(n, ast.Name) and n.id in targets
                            for n in ast.walk(sub.slice)
                        )
                    ):
                        hit = sub
                        break
        if hit is not None:
            hits.append(hit)
    return hits


def rule_nan_equivalence_misused(ctx: RuleContext) -> list[ast.AST]:
    hits = []
    for node in ctx.tree.walk():
        if not isinstance(node, ast.Compare):
            continue
        if not any(isinstance(op, (ast.Eq, ast.NotEq)) for op in node.ops):
            continue
        operands = [node.left, *node.comparators]
        if any(ctx.canonical(o) in _NAN_NAMES for o in operands):
            hits.append(node)
    return hits


def rule_chain_indexing(ctx: RuleContext) -> list[ast.AST]:
    hits = []
    for node in ctx.tree.walk():
        if not (isinstance(node, ast.Subscript) and isinstance(node.value, ast.Subscript)):
            continue
        if ctx.role(node) != "dataframe":
            continue
        parent = ctx.tree.parent(node)
        # report only the outermost subscript of each chain
        if isinstance(parent, ast.Subscript) and parent.value is node:
            continue
        hits.append(node)
    return hits


def rule_columns_dtype_not_set(ctx: RuleContext) -> list[ast.AST]:
    readers = set(ctx.config.dataframe_readers)
    hits = []
    for call in ctx.calls():
        if ctx.canonical(call.func) not in readers:
            continue
        kwargs = {kw.arg for kw in call.keywords if kw.arg}
        if not ({"dtype", "usecols"} & kwargs):
            hits.append(call)
    return hits


def rule_empty_column_misinit(ctx: RuleContext) -> list[ast.AST]:
    hits = []
    for node in ctx.tree.walk():
        if not (isinstance(node, ast.Assign) and len(node.targets) == 1):
            continue
        target = node.targets[0]
        if not (
            isinstance(target, ast.Subscript)
            and ctx.role(target.value) == "dataframe"
            and isinstance(target.slice, ast.Constant)
            and isinstance(target.slice.value, str)
        ):
            continue
        value = node.value
        if isinstance(value, ast.Constant) and (value.value == 0 or value.value == "") and not isinstance(value.value, bool):
            hits.append(node)
    return hits


def rule_merge_params_not_set(ctx: RuleContext) -> list[ast.AST]:
    hits = []
    for call in ctx.calls():
        func = call.func
        if not (isinstance(func, ast.Attribute) and func.attr == "merge"):
            continue
        if ctx.role(func.value) != "dataframe":
            continue
        kwargs = {kw.arg for kw in call.keywords if kw.arg}
        if not ({"how", "on"} <= kwargs):
            hits.append(call)
    return hits


def rule_inplace_api_misused(ctx: RuleContext) -> list[ast.AST]:
    methods = set(ctx.config.inplace_methods)
    hits = []
    for node in ctx.tree.walk():
        if not (isinstance(node, ast.Expr) and isinstance(node.value, ast.Call)):
            continue
        call = node.value
        func = call.func
        if not (isinstance(func, ast.Attribute) and func.attr in methods):
            continue
        if ctx.role(func.value) not in ("dataframe", "series"):
            continue
        inplace_true = any(
            kw.arg == "inplace" and isinstance(kw.value, ast.Constant) and kw.value.value is True
            for kw in call.keywords
        )
        if not inplace_true:
            hits.append(node)
    return hits


def rule_dataframe_conversion_misused(ctx: RuleContext) -> list[ast.AST]:
    hits = []
    for node in ctx.tree.walk():
        if (
            isinstance(node, ast.Attribute)
            and node.attr == "values"
            and isinstance(node.value, ast.Name)
            and ctx.bindings.role_of(node.value.id, node) == "dataframe"
        ):
            hits.append(node)
    return hits


def rule_matmul_api_misused(ctx: RuleContext) -> list[ast.AST]:
    hits = []
    for call in ctx.calls():
        if ctx.canonical(call.func) != "numpy.dot":
            continue
        if len(call.args) == 2 and not any(isinstance(a, ast.Starred) for a in call.args):
            hits.append(call)
    return hits


def rule_gradients_not_cleared(ctx: RuleContext) -> list[ast.AST]:
    hits = []
    for call in ctx.calls():
        if not (isinstance(call.func, ast.Attribute) and call.func.attr == "backward"):
            continue
        loop = ctx.enclosing_loop(call)
        if loop is None:
            continue
        cleared = any(
            isinstance(sub, ast.Call)
            and isinstance(sub.func, ast.Attribute)
            and sub.func.attr == "zero_grad"
            and _pos(sub) < _pos(call)
            for sub in ast.walk(loop)
        )
        if not cleared:
            hits.append(call)
    return hits


def rule_memory_not_freed(ctx: RuleContext) -> list[ast.AST]:
    prefixes = ctx.config.model_construction_prefixes
    free_calls = set(ctx.config.memory_free_calls)
    hits = []
    for call in ctx.calls():
        canonical = ctx.canonical(call.func)
        if canonical is None or not any(canonical.startswith(p) for p in prefixes):
            continue
        loop = ctx.enclosing_loop(call)
        if loop is None:
            continue
        freed = any(
            isinstance(sub, ast.Delete)
            or (
                isinstance(sub, ast.Call)
                and isinstance(sub.func, ast.Attribute)
                and sub.func.attr in free_calls
            )
            for sub in ast.walk(loop)
        )
        if not freed:
            hits.append(call)
    return hits


def rule_hyperparameters_not_set(ctx: RuleContext) -> list[ast.AST]:
    estimators = set(ctx.config.estimators)
    optimizer_prefixes = ctx.config.optimizer_prefixes
    hits = []
    for call in ctx.calls():
        canonical = ctx.canonical(call.func)
        if canonical is None:
            continue
        is_estimator = canonical.rsplit(".", 1)[-1] in estimators
        is_optimizer = any(canonical.startswith(p) for p in optimizer_prefixes)
        if (is_estimator or is_optimizer) and not call.keywords:
            hits.append(call)
    return hits


def rule_deterministic_option_not_used(ctx: RuleContext) -> list[object]:
    if "torch" not in ctx.imports.roots:
        return []
    has_backward = False
    for call in ctx.calls():
        if isinstance(call.func, ast.Attribute):
            if call.func.attr == "backward":
                has_backward = True
            if call.func.attr == "use_deterministic_algorithms":
                return []
    return [HIT_FILE] if has_backward else []


def rule_randomness_uncontrolled(ctx: RuleContext) -> list[object]:
    prefixes = ctx.config.random_api_prefixes
    seed_calls = set(ctx.config.seed_calls)
    uses_random = False
    for call in ctx.calls():
        canonical = ctx.canonical(call.func)
        if canonical is None:
            continue
        if canonical in seed_calls:
            return []
        if any(canonical.startswith(p) for p in prefixes):
            uses_random = True
    return [HIT_FILE] if uses_random else []


RULES: dict[str, Callable[[RuleContext], list]] = {
    "chain-indexing": rule_chain_indexing,
    "columns-dtype-not-set": rule_columns_dtype_not_set,
    "dataframe-conversion-misused": rule_dataframe_conversion_misused,
    "deterministic-option-not-used": rule_deterministic_option_not_used,
    "empty-column-misinit": rule_empty_column_misinit,
    "gradients-not-cleared": rule_gradients_not_cleared,
    "hyperparameters-not-set": rule_hyperparameters_not_set,
    "inplace-api-misused": rule_inplace_api_misused,
    "matmul-api-misused": rule_matmul_api_misused,
    "memory-not-freed": rule_memory_not_freed,
    "merge-params-not-set": rule_merge_params_not_set,
    "nan-equivalence-misused": rule_nan_equivalence_misused,
    "randomness-uncontrolled": rule_randomness_uncontrolled,
    "unnecessary-iteration": rule_unnecessary_iteration,
}
