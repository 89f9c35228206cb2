import os
import tempfile
from io import StringIO
from unittest import mock

import orjson
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from simplicial.helpers import runner


PATH_OF_TWO_EDGES = {
    'name': 'path',
    'dim_cap': 2,
    'simplices': {
        '0': [{'id': 'a'}, {'id': 'b'}, {'id': 'c'}],
        '1': [
            {'id': 'f', 'faces': [{'id': 'b'}, {'id': 'a'}]},
            {'id': 'g', 'faces': [{'id': 'c'}, {'id': 'b'}]},
        ],
    },
}


class RigidCommandTest(SimpleTestCase):

    def rigid(self, *args):
        out = StringIO()
        call_command('rigid', *args, stdout=out)
        return out.getvalue()

    def rigid_json(self, *args):
        return orjson.loads(self.rigid(*args, '--format', 'json'))

    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as raised:
            self.rigid(*args)
        self.assertEqual(raised.exception.returncode, code)

    def write_json(self, directory, name, data):
        path = os.path.join(directory, name)
        with open(path, 'wb') as handle:
            handle.write(orjson.dumps(data))
        return path

    def test_rigid_delta_counts(self):
        report = self.rigid_json('rigid-delta', '3')
        self.assertTrue(report['status'])
        self.assertEqual(report['exit_code'], 0)
        counts = report['data']['counts']['0->3']['all']
        self.assertEqual([counts[str(k)] for k in range(3)], [4, 9, 16])

    def test_json_output_is_deterministic(self):
        self.assertEqual(self.rigid('rigid-delta', '2', '--format', 'json'),
                         self.rigid('rigid-delta', '2', '--format', 'json'))

    def test_demos(self):
        self.assertIn('no filler: confirmed', self.rigid('demo', 'cosk-sphere'))
        report = self.rigid_json('demo', 'worked-example')
        self.assertTrue(report['data']['matches'])

    def test_demo_fixture_is_built_once(self):
        with mock.patch.object(runner, 'demo_fixture', wraps=runner.demo_fixture) as built:
            self.assertIn('computed', self.rigid('demo', 'cube'))
        self.assertEqual(built.call_count, 1)

    def test_iso(self):
        report = self.rigid_json('iso', '[2]', '--dim-cap', '2', '--size-cap', '3')
        self.assertEqual(report['group'], 'OK')
        self.assertEqual(set(report['data']), {'word-to-necklace', 'necklace-to-cube'})

    def test_hom_export(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'hom.json')
            self.rigid('hom', 'simplex:3', '0', '3', '--output', path)
            with open(path, 'rb') as handle:
                export = orjson.loads(handle.read())
        self.assertEqual(len(export['hom']['simplices']['2']), 2)
        self.assertEqual(len(export['index']), 11)

    def test_not_a_quasicategory(self):
        with tempfile.TemporaryDirectory() as directory:
            path = self.write_json(directory, 'path.json', PATH_OF_TWO_EDGES)
            self.assertExitCode(1, 'check-qcat', path, '--dim-cap', '2')

    def test_malformed_file(self):
        with tempfile.TemporaryDirectory() as directory:
            broken = dict(PATH_OF_TWO_EDGES, simplices={'1': [{'id': 'f', 'faces': [{'id': 'x'}, {'id': 'y'}]}]})
            path = self.write_json(directory, 'broken.json', broken)
            self.assertExitCode(3, 'check-qcat', path)

    def test_input_errors(self):
        self.assertExitCode(3, 'check-qcat')
        self.assertExitCode(3, 'check-qcat', 'no-such-category')
        self.assertExitCode(3, 'demo', 'no-such-demo')
        self.assertExitCode(3, 'rigid-delta', '3', '--dim-cap', '0')

    def test_budget_exhausted(self):
        self.assertExitCode(2, 'hc-nerve', 'rs', '--budget', '1')

    def test_check_cosk_samples_with_the_seed(self):
        caps = dict(settings.RIGIDIFICATION, SPHERE_SAMPLE=3, SPHERE_LIMIT=5)
        with override_settings(RIGIDIFICATION=caps):
            args = ('check-cosk', '[3]', '2', '--dim-cap', '4', '--seed', '3', '--format', 'json')
            first, second = self.rigid(*args), self.rigid(*args)
        self.assertEqual(first, second)
        report = orjson.loads(first)
        self.assertEqual(report['exit_code'], 0)
        self.assertEqual(report['data']['sampled_dimensions'], [3, 4])
        self.assertEqual(report['data']['seed'], 3)
        self.assertEqual(report['data']['spheres_checked'], 6)
