from __future__ import annotations

import ast

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlsmells.pysource import (
    ImportTable,
    SourceFile,
    bind_variables,
    classify_ml_file,
    count_loc,
    normalize_path,
    parse_source,
    resolve_imports,
)


def _parse(code: str, path: str = "t.py"):
    return parse_source(SourceFile.from_text(path, code))


def _analysis(code: str):
    tree = _parse(code)
    imports = resolve_imports(tree)
    return tree, imports, bind_variables(tree, imports)


class TestParse:
    def test_minimal_program(self):
        tree = _parse("x = 1\n")
        assign = tree.root.body[0]
        assert isinstance(assign, ast.Assign)
        assert assign.lineno == 1

    def test_listing_loop_encloses_backward_call(self, listing_fixed):
        tree = _parse(listing_fixed)
        backward = [
            n
            for n in tree.walk()
            if isinstance(n, ast.Call)
            and isinstance(n.func, ast.Attribute)
            and n.func.attr == "backward"
        ]
        assert len(backward) == 1
        assert backward[0].lineno == 11
        loops = [n for n in tree.walk() if isinstance(n, ast.For)]
        assert any(
            loop.lineno <= backward[0].lineno <= (loop.end_lineno or 0) for loop in loops
        )

    def test_malformed_input_raises_syntax_error(self):
        with pytest.raises(SyntaxError) as exc:
            _parse("def f(:\n")
        assert exc.value.lineno == 1

    def test_deterministic_reparse(self, listing_smelly):
        a = ast.dump(_parse(listing_smelly).root)
        b = ast.dump(_parse(listing_smelly).root)
        assert a == b

    def test_snippet_reconstructs_source(self):
        tree = _parse("x = 1\ny = foo(2,  3)\n")
        call = [n for n in tree.walk() if isinstance(n, ast.Call)][0]
        assert tree.snippet(call) == "foo(2,  3)"
        assert tree.snippet(call) in tree.source

    def test_every_node_snippet_lies_at_its_recorded_lines(self, listing_fixed):
        tree = _parse(listing_fixed)
        for node in tree.walk():
            if not hasattr(node, "lineno"):
                continue
            snippet = tree.snippet(node)
            if not snippet:
                continue
            span_text = "\n".join(tree.lines[node.lineno - 1 : node.end_lineno])
            assert snippet in span_text, ast.dump(node)[:80]

    def test_child_spans_nest_within_parents(self, listing_fixed):
        tree = _parse(listing_fixed)
        for node in tree.walk():
            if not hasattr(node, "lineno"):
                continue
            parent = tree.parent(node)
            if parent is None or not hasattr(parent, "lineno"):
                continue
            assert node.lineno >= 1
            assert parent.lineno <= node.lineno
            assert (node.end_lineno or 0) <= (parent.end_lineno or 10**9)

    @given(
        st.lists(
            st.sampled_from(["x = 1", "y = x + 2", "print(x)", "if x:\n    pass"]),
            min_size=0,
            max_size=12,
        )
    )
    def test_parse_is_pure(self, statements):
        code = "\n".join(statements) + "\n"
        assert ast.dump(_parse(code).root) == ast.dump(_parse(code).root)


class TestImports:
    def test_alias_form(self):
        _, imports, _ = _analysis("import pandas as pd\n")
        assert imports.aliases["pd"] == "pandas"
        assert "pandas" in imports.roots

    def test_from_import(self):
        _, imports, _ = _analysis("from torch import optim\n")
        assert imports.aliases["optim"] == "torch.optim"
        assert imports.resolve("optim.SGD") == "torch.optim.SGD"

    def test_from_import_as(self):
        _, imports, _ = _analysis("from torch.nn import functional as F\n")
        assert imports.aliases["F"] == "torch.nn.functional"

    def test_empty_file(self):
        _, imports, _ = _analysis("")
        assert imports.aliases == {}
        assert imports.roots == set()

    def test_star_import_records_root_only(self):
        _, imports, _ = _analysis("from numpy import *\n")
        assert imports.roots == {"numpy"}
        assert imports.aliases == {}

    def test_dotted_plain_import_binds_root(self):
        _, imports, _ = _analysis("import torch.nn\n")
        assert imports.aliases["torch"] == "torch"
        assert imports.resolve("torch.nn.Linear") == "torch.nn.Linear"

    def test_relative_import_ignored(self):
        _, imports, _ = _analysis("from . import helpers\n")
        assert imports.aliases == {}


class TestClassify:
    def test_pandas_marks_ml(self):
        _, imports, _ = _analysis("import pandas as pd\n")
        assert classify_ml_file(imports) is True

    def test_numpy_alone_is_not_ml(self):
        _, imports, _ = _analysis("import numpy as np\n")
        assert classify_ml_file(imports) is False

    def test_empty_is_not_ml(self):
        assert classify_ml_file(ImportTable()) is False

    @pytest.mark.parametrize("lib", ["pandas", "tensorflow", "theano", "torch"])
    def test_each_filter_library(self, lib):
        _, imports, _ = _analysis(f"import {lib}\n")
        assert classify_ml_file(imports) is True

    @given(st.sets(st.sampled_from(["os", "sys", "json", "numpy", "requests"]), max_size=4))
    def test_adding_imports_is_monotone(self, extra_libs):
        base = "import pandas\n"
        extended = base + "".join(f"import {lib}\n" for lib in sorted(extra_libs))
        _, imports_base, _ = _analysis(base)
        _, imports_ext, _ = _analysis(extended)
        assert classify_ml_file(imports_base) is True
        assert classify_ml_file(imports_ext) is True


class TestBindings:
    def test_read_csv_seeds_dataframe(self):
        tree, _, bindings = _analysis('import pandas as pd\ndf = pd.read_csv("a.csv")\n')
        assert bindings.role_of("df") == "dataframe"

    def test_torch_optim_seeds_optimizer(self):
        _, _, bindings = _analysis(
            "import torch\nopt = torch.optim.SGD(m.parameters(), lr=0.1)\n"
        )
        assert bindings.role_of("opt") == "optimizer"

    def test_unknown_call_stays_unknown(self):
        _, _, bindings = _analysis("x = foo()\n")
        assert bindings.role_of("x") == "unknown"

    def test_last_assignment_wins(self):
        _, _, bindings = _analysis(
            'import pandas as pd\nx = pd.read_csv("a.csv")\nx = foo()\n'
        )
        assert bindings.role_of("x") == "unknown"

    def test_subscript_chain_keeps_dataframe_role(self):
        _, _, bindings = _analysis(
            'import pandas as pd\ndf = pd.read_csv("a.csv")\nsub = df["a"]\n'
        )
        assert bindings.role_of("sub") == "dataframe"

    def test_estimator_constructor_by_name(self):
        _, _, bindings = _analysis(
            "from sklearn.cluster import KMeans\nmodel = KMeans(n_clusters=3)\n"
        )
        assert bindings.role_of("model") == "estimator"

    def test_torch_module_seeds_model(self):
        _, _, bindings = _analysis("import torch\nnet = torch.nn.Linear(2, 2)\n")
        assert bindings.role_of("net") == "model"

    def test_numpy_constructor_seeds_ndarray(self):
        _, _, bindings = _analysis("import numpy as np\narr = np.zeros(4)\n")
        assert bindings.role_of("arr") == "ndarray"

    def test_pandas_series_seeded(self):
        _, _, bindings = _analysis("import pandas as pd\ns = pd.Series([1])\n")
        assert bindings.role_of("s") == "series"

    def test_torch_constructor_seeds_tensor(self):
        _, _, bindings = _analysis("import torch\nt = torch.ones(3)\n")
        assert bindings.role_of("t") == "tensor"

    def test_function_scope_inherits_module_bindings(self):
        code = (
            "import pandas as pd\n"
            'df = pd.read_csv("a.csv")\n'
            "def use():\n"
            "    local = df.merge(df)\n"
            "    return local\n"
        )
        tree, imports, bindings = _analysis(code)
        fn = tree.root.body[2]
        inner_assign = fn.body[0]
        assert bindings.role_of("local", inner_assign) == "dataframe"
        # the inner binding must not leak into module scope
        assert bindings.role_of("local") == "unknown"


class TestCountLoc:
    def test_empty(self):
        assert count_loc("") == 0

    def test_comment_and_blank_skipped(self):
        assert count_loc("# c\n\nx=1\n") == 1

    def test_listing_has_eleven_lines(self, listing_fixed):
        assert count_loc(listing_fixed) == 11

    def test_trailing_newline_irrelevant(self):
        assert count_loc("x=1") == count_loc("x=1\n") == count_loc("x=1\n\n")

    @given(
        st.text(alphabet="abc=1# \n", max_size=80),
        st.lists(st.sampled_from(["", "   ", "# note", "  # indented comment"]), max_size=5),
    )
    def test_appending_blank_or_comment_lines_invariant(self, base, extras):
        extended = base + "\n" + "\n".join(extras)
        assert count_loc(extended) == count_loc(base)


class TestNormalizePath:
    def test_plain(self):
        assert normalize_path("src/a.py") == "src/a.py"

    def test_dot_segments_collapsed(self):
        assert normalize_path("./src/./a.py") == "src/a.py"

    def test_escaping_rejected(self):
        with pytest.raises(ValueError):
            normalize_path("../secrets.py")
