from django.core.management.base import BaseCommand, CommandError

from simplicial.helpers.errors import InputError
from simplicial.helpers.runner import COMMANDS, run
from simplicial.serializers import RunConfigSerializer, validated
from utils.response.response_format import input_error_report, render_json


class Command(BaseCommand):
    help = 'Hom-spaces of the rigidification of finite simplicial sets, and the checks built on them.'

    def add_arguments(self, parser):
        parser.add_argument('command', choices=sorted(COMMANDS), help='computation to run')
        parser.add_argument('inputs', nargs='*', help='files, built-in names and numbers the computation takes')
        parser.add_argument('--dim-cap', type=int, dest='dim_cap')
        parser.add_argument('--size-cap', type=int, dest='size_cap')
        parser.add_argument('--horn-dim', type=int, dest='horn_dim')
        parser.add_argument('--budget', type=int)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--jobs', type=int)
        parser.add_argument('--format', choices=['human', 'json'], default='human')
        parser.add_argument('--output', help='write the export (hom-space, category, nerve) to this file')

    def handle(self, *args, **options):
        fields = ('command', 'inputs', 'dim_cap', 'size_cap', 'horn_dim', 'budget', 'seed', 'jobs', 'format', 'output')
        data = {key: options.get(key) for key in fields if options.get(key) is not None}
        try:
            config = validated(RunConfigSerializer(data=data), 'options')
        except InputError as e:
            self._emit(input_error_report(e.message, e.errors), [e.message], data.get('format', 'human'))
            raise CommandError(e.message, returncode=3)

        result = run(config)
        if config.output and result.export is not None:
            with open(config.output, 'wb') as handle:
                handle.write(render_json(result.export))
        self._emit(result.report, result.lines, config.format)
        if result.exit_code:
            raise CommandError(result.report['message'], returncode=result.exit_code)

    def _emit(self, report, lines, fmt):
        if fmt == 'json':
            self.stdout.write(render_json(report).decode())
            return
        style = self.style.SUCCESS if report['status'] else (
            self.style.WARNING if report['group'] == 'NEGATIVE' else self.style.ERROR
        )
        self.stdout.write(style(report['message']))
        for line in lines:
            self.stdout.write(line)
        if report['errors'] and report['group'] != 'NEGATIVE':
            self.stdout.write(self.style.ERROR(str(report['errors'])))
