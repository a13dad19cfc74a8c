from mixdescent.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Checks the property families on random finite problems and writes a pass/fail report'
    experiment = 'oracle'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--instances', dest='instances', type=int, help='Random instances per family')

    def flags(self, options):
        flags = super().flags(options)
        flags['instances'] = options.get('instances')
        return flags

    def handle(self, *args, **options):
        from mixdescent.experiments import get_experiment

        experiment = get_experiment(self.get_config(options))
        experiment.run()
        return '\n'.join("{name}\t{instances}\t{worst_violation:.6g}\t{verdict}".format(**r.as_row())
                         for r in experiment.results)
