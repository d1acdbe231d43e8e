"""REPL/mm-block sessions and the command-line interface."""

import json

from click.testing import CliRunner

from casbridge.cli import main
from casbridge.session import (
    Session,
    parse_mm_blocks,
    parse_repl_command,
    run_mm_block,
)

FIG3_BLOCK = '''
begin_mm_block

"Solve[Sin[x] == 0 && 2 < x < 4, x, Reals][[1]][[1]][[2]]";

"Factor["(x^2-2*x+1)"]";

end_mm_block
'''


class TestSession:
    def test_repl_factor_antiquote(self):
        session = Session()
        out = session.run_source('Factor["(x^2-2*x+1)"]')
        assert out.text == "(x + -1)^2"

    def test_repl_plain_arithmetic(self):
        session = Session()
        assert session.run_source("Plus[2,3]").text == "5"

    def test_unknown_identifier_reports_and_continues(self):
        session = Session()
        out = session.run_source('Factor["(frob q 2)"]')
        assert out.error and "elaborate" in out.error
        assert session.run_source("Plus[1,1]").text == "2"

    def test_repl_equals_singleton_block(self):
        session_a = Session()
        session_b = Session()
        repl_out = session_a.run_source('Factor["(x^2-2*x+1)"]')
        block = parse_mm_blocks(
            'begin_mm_block\n"Factor["(x^2-2*x+1)"]";\nend_mm_block')[0]
        block_out = run_mm_block(session_b, block)[0]
        assert repl_out.text == block_out.text

    def test_fig3_block(self):
        session = Session()
        blocks = parse_mm_blocks(FIG3_BLOCK)
        outputs = run_mm_block(session, blocks[0])
        assert len(outputs) == 2
        # the first command is outside the supported fragment but must not
        # stop the second
        assert outputs[1].text == "(x + -1)^2"

    def test_empty_block(self):
        blocks = parse_mm_blocks("begin_mm_block\nend_mm_block")
        assert run_mm_block(Session(), blocks[0]) == []

    def test_image_command_produces_svg(self):
        session = Session()
        block = parse_mm_blocks(
            'begin_mm_block\nas image "Plot[" (fun x : real, x*x) '
            '", 0, 1]";\nend_mm_block')[0]
        out, = run_mm_block(session, block)
        assert out.display == "image"
        assert out.image_svg.startswith("<svg")

    def test_unfolding_parameter(self, env):
        from casbridge.kernel import (
            DeclKind,
            Declaration,
            Name,
            elaborate,
            parse_preexpr,
        )

        body = elaborate(env, parse_preexpr("fun x : real, x*x + 1", env))
        decl = Declaration(Name.of("f"), DeclKind.DEFINITION,
                           _real_fn_type(env), value=body)
        session = Session(env=env.insert(decl))
        block = parse_mm_blocks(
            'begin_mm_block (unfolding f)\n'
            'as image "Plot[" (fun t : real, f t) ", 0, 1]";\n'
            'end_mm_block')[0]
        out, = run_mm_block(session, block)
        assert out.display == "image"

    def test_lone_quoted_string_is_plain_command(self):
        cmd = parse_repl_command('"Plus[2, 3]"')
        assert cmd.segments == ("Plus[2, 3]",)


def _real_fn_type(env):
    from casbridge.kernel import BinderInfo, Name, Pi, mk_const

    return Pi(Name.of("x"), BinderInfo.DEFAULT, mk_const("real"),
              mk_const("real"))


class TestCli:
    def setup_method(self):
        self.runner = CliRunner()

    def invoke(self, *args):
        return self.runner.invoke(main, list(args))

    def test_factor(self):
        result = self.invoke("factor", "x^2-2*x+1")
        assert result.exit_code == 0
        assert "(x + -1)^2" in result.output
        assert "verified (ring)" in result.output

    def test_factor_json(self):
        result = self.invoke("--json", "factor", "x^2-2*x+1")
        payload = json.loads(result.output)
        assert payload["factored"] == "(x + -1)^2"

    def test_linarith_both_oracles(self):
        hyps = "2*x<3*y; -4*x+2*z<0; 12*y-4*z<0"
        for oracle in ("fm", "cas"):
            result = self.invoke("linarith", hyps, "--oracle", oracle)
            assert result.exit_code == 0, result.output
            assert "false (certificate" in result.output
        cas_run = self.invoke("linarith", hyps, "--oracle", "cas")
        assert "certificate 4,2,1 checked" in cas_run.output

    def test_linarith_satisfiable_exits_nonzero(self):
        result = self.invoke("linarith", "x <= 0")
        assert result.exit_code == 1

    def test_lu(self):
        result = self.invoke("lu", "[[1,2,3],[1,4,9],[1,8,27]]")
        assert result.exit_code == 0
        assert "verified" in result.output

    def test_solve(self):
        result = self.invoke("solve", "x + y = 3; x - y = 1")
        assert result.exit_code == 0
        assert "x = 2, y = 1" in result.output

    def test_plausible_pass_and_fail(self):
        ok = self.invoke("plausible", "x > 1", "x > 0")
        assert ok.exit_code == 0 and "plausible" in ok.output
        bad = self.invoke("plausible", "x > 0", "x > 1")
        assert bad.exit_code == 1 and "countermodel" in bad.output

    def test_prove_intuit(self):
        result = self.invoke("prove",
                             "Implies[Or[P, Q], Not[And[Not[P], Not[Q]]]]",
                             "--tactic", "intuit")
        assert result.exit_code == 0
        assert "proved" in result.output and "assumption" in result.output

    def test_prove_refutable_fails(self):
        result = self.invoke("prove", "Equal[1, 2]", "--tactic", "norm_num")
        assert result.exit_code == 1

    def test_info(self):
        result = self.invoke("info", "pow_two_nonneg")
        assert result.exit_code == 0
        assert "axiom pow_two_nonneg" in result.output
        assert "nonnegative" in result.output

    def test_explode(self):
        result = self.invoke("explode", "imp_self")
        assert result.exit_code == 0
        assert "assumption" in result.output

    def test_run_block_file(self, tmp_path):
        path = tmp_path / "demo.mm"
        path.write_text(FIG3_BLOCK, encoding="utf-8")
        result = self.invoke("run", str(path))
        assert "(x + -1)^2" in result.output

    def test_json_round_trips_wire_schema(self):
        result = self.invoke("--json", "linarith",
                             "2*x<3*y; -4*x+2*z<0; 12*y-4*z<0",
                             "--oracle", "cas")
        payload = json.loads(result.output)
        assert payload["certificate"] == ["4", "2", "1"]
        assert payload["method"] == "linarith:farkas"

    def test_usage_error_exit_code(self):
        result = self.invoke("lu", "not a matrix")
        assert result.exit_code == 2
