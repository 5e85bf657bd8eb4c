"""
Tests for the command-line interface
"""

import json

import pandas as pd
import pytest
from click.testing import CliRunner

from app.cli import FloatEncoder, cli, float_text
from app.services.oracle_service import GRID_COLUMNS


@pytest.fixture
def runner():
    return CliRunner(mix_stderr=False)


def invoke(runner, *args):
    return runner.invoke(cli, ['--no-timestamp', *args])


def document(result):
    assert result.exit_code == 0, result.stderr
    return json.loads(result.stdout)


class TestMaxEnt:

    def test_example_state(self, runner):
        doc = document(invoke(runner, 'maxent', '--r', '1/sqrt3,1/sqrt3,1/sqrt3', '--k', '1'))
        assert doc['command'] == 'maxent'
        assert doc['schema_version'] == '1.0'
        assert 'generated_at' not in doc
        assert doc['q'][7] == pytest.approx(-0.0915064, abs=1e-7)
        assert doc['entropy'] == pytest.approx(2.0, abs=1e-12)
        assert doc['converged'] is True

    def test_axis_state_at_order_two(self, runner):
        doc = document(invoke(runner, 'maxent', '--r', '1,0,0', '--k', '2'))
        assert doc['primal_value'] == pytest.approx(0.3535534, abs=1e-7)
        assert doc['gap'] <= 1e-9

    def test_timestamp_is_included_by_default(self, runner):
        result = runner.invoke(cli, ['maxent', '--r', '0,0,0'])
        assert 'generated_at' in document(result)

    def test_output_is_deterministic(self, runner):
        first = invoke(runner, 'maxent', '--r', '0.2,-0.4,0.1', '--k', '3')
        second = invoke(runner, 'maxent', '--r', '0.2,-0.4,0.1', '--k', '3')
        assert first.stdout == second.stdout

    @pytest.mark.parametrize('value', ['0.1,0.2', 'a,0,0', '', '0.1,,0.2'])
    def test_malformed_vector_is_a_usage_error(self, runner, value):
        result = invoke(runner, 'maxent', '--r', value)
        assert result.exit_code == 2

    def test_bad_order_is_a_usage_error(self, runner):
        assert invoke(runner, 'maxent', '--r', '0,0,0', '--k', '0').exit_code == 2


class TestCheck:

    def test_pure_state(self, runner):
        doc = document(invoke(runner, 'check', '--r', '0.6,0,0.8', '--kmax', '3'))
        assert doc['overall'] is True
        assert len(doc['per_k']) == 3
        assert doc['theorem_consistent'] is True

    def test_failure_still_exits_zero(self, runner):
        doc = document(invoke(runner, 'check', '--r', '1,1,1', '--kmax', '2'))
        assert doc['overall'] is False
        assert doc['first_failure'] == 1
        assert doc['is_quantum_state'] is False

    def test_outside_state_over_five_orders(self, runner):
        doc = document(invoke(runner, 'check', '--r', '0.8,0.8,0', '--kmax', '5'))
        assert doc['overall'] is False
        assert doc['first_failure'] == 1
        assert len(doc['per_k']) == 5


class TestClassical:

    def test_inside_l1_ball(self, runner):
        doc = document(invoke(runner, 'classical', '--r', '0.3,0.3,0.3'))
        assert doc['classical'] is True
        assert doc['l1_norm'] == pytest.approx(0.9)

    def test_example_state_is_not_classical(self, runner):
        doc = document(invoke(runner, 'classical', '--r', '0.57735,0.57735,0.57735'))
        assert doc['classical'] is False
        assert doc['value'] > 0.5

    def test_outside_cube(self, runner):
        doc = document(invoke(runner, 'classical', '--r', '1.5,0,0'))
        assert doc['classical'] is False
        assert doc['status'] == 'infeasible'
        assert doc['value'] is None


class TestFmax:

    def test_enumeration_at_order_two(self, runner):
        doc = document(invoke(runner, 'fmax', '--k', '2', '--enumerate'))
        assert doc['method'] == 'enumerate'
        assert doc['max_f'] == pytest.approx(0.7071068, abs=1e-7)
        assert doc['argmax_class'] == 2
        assert sum(g['count'] for g in doc['groups']) == 80

    def test_order_one_is_flat(self, runner):
        doc = document(invoke(runner, 'fmax', '--k', '1'))
        assert doc['max_f'] == pytest.approx(1.0, abs=1e-15)

    def test_multistart(self, runner):
        doc = document(invoke(runner, 'fmax', '--k', '2', '--multistart', '10', '--seed', '42'))
        assert doc['method'] == 'multistart'
        assert doc['seed'] == 42
        assert doc['max_f'] <= doc['bound'] + 1e-7

    def test_exclusive_methods(self, runner):
        result = invoke(runner, 'fmax', '--k', '2', '--enumerate', '--multistart', '5')
        assert result.exit_code == 2


class TestSweep:

    def test_writes_csv(self, runner, tmp_path):
        out = tmp_path / 'grid.csv'
        doc = document(invoke(runner, 'sweep', '--k', '1', '--grid', '0.5', '--out', str(out)))
        assert doc['rows'] == 125
        frame = pd.read_csv(out)
        assert list(frame.columns) == GRID_COLUMNS
        assert len(frame) == 125
        assert not list(tmp_path.glob('.sweep-*'))

    def test_csv_to_stdout(self, runner):
        result = runner.invoke(cli, ['--format', 'csv', 'sweep', '--grid', '1'])
        assert result.exit_code == 0
        lines = result.stdout.strip().splitlines()
        assert lines[0] == ','.join(GRID_COLUMNS)
        assert len(lines) == 28

    def test_order_two_reaches_cube_corners(self, runner):
        result = runner.invoke(cli, ['--format', 'csv', 'sweep', '--k', '2', '--grid', '1'])
        assert result.exit_code == 0, result.stderr
        assert len(result.stdout.strip().splitlines()) == 28

    def test_unwritable_destination(self, runner, tmp_path):
        out = tmp_path / 'missing' / 'grid.csv'
        result = invoke(runner, 'sweep', '--grid', '1', '--out', str(out))
        assert result.exit_code == 4

    @pytest.mark.parametrize('step', ['0', '1.5'])
    def test_bad_step(self, runner, step):
        assert invoke(runner, 'sweep', '--grid', step).exit_code == 2


class TestProbe:

    @pytest.mark.parametrize('alpha, order, expected', [
        ('2', '2', 'MATCH'),
        ('3', '3', 'JUMP'),
        ('1.5', '2', 'DIVERGE'),
        ('1', '1', 'DIVERGE'),
        ('5', '5', 'INCONCLUSIVE'),
    ])
    def test_classifications(self, runner, alpha, order, expected):
        doc = document(invoke(runner, 'probe', '--alpha', alpha, '--order', order))
        assert doc['classification'] == expected

    def test_increasing_steps_rejected(self, runner):
        result = invoke(runner, 'probe', '--alpha', '2', '--order', '1', '--steps', '0.001,0.01')
        assert result.exit_code == 2

    def test_bad_alpha(self, runner):
        assert invoke(runner, 'probe', '--alpha', '0', '--order', '1').exit_code == 2


class TestRunConfiguration:

    def test_config_file_sets_defaults(self, runner, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text('k_max=2\ntol_entropy=1e-6\n')
        doc = document(invoke(runner, '--config', str(path), 'check', '--r', '0,0,0'))
        assert doc['k_max'] == 2

    def test_invalid_config_is_a_usage_error(self, runner, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text('k_max=0\n')
        result = invoke(runner, '--config', str(path), 'check', '--r', '0,0,0')
        assert result.exit_code == 2
        assert 'k_max' in result.stderr

    def test_missing_config_file(self, runner, tmp_path):
        result = invoke(runner, '--config', str(tmp_path / 'absent.cfg'), 'check', '--r', '0,0,0')
        assert result.exit_code == 2

    def test_negative_tolerance_rejected(self, runner):
        result = invoke(runner, '--tol-entropy', '-1', 'check', '--r', '0,0,0')
        assert result.exit_code == 2


class TestNumberFormat:

    def test_seventeen_significant_digits(self):
        assert json.dumps({'x': 1 / 3}, cls=FloatEncoder) == '{"x": 0.33333333333333331}'
        assert float_text(0.1) == '0.10000000000000001'

    def test_integral_values_stay_floats(self):
        assert float_text(1.0) == '1.0'
        assert float_text(-0.0) == '-0.0'
        assert isinstance(json.loads(json.dumps([2.0], cls=FloatEncoder))[0], float)

    def test_round_trip_is_exact(self, rng):
        values = list(rng.normal(scale=1e3, size=200)) + [1e-300, 5e-324, 1.7976931348623157e308]
        assert json.loads(json.dumps(values, cls=FloatEncoder)) == values

    def test_documents_use_full_precision(self, runner):
        result = invoke(runner, 'maxent', '--r', '1/sqrt3,1/sqrt3,1/sqrt3', '--k', '1')
        doc = document(result)
        assert f'{doc["q"][7]:.17g}' in result.stdout
