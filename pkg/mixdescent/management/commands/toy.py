from mixdescent.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Runs the Gaussian mixture experiment: one trace table per method and dimension'
    experiment = 'toy'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--dims', dest='dims', type=str, help="Comma separated dimensions, ie. 8,16")

    def flags(self, options):
        flags = super().flags(options)
        if options.get('dims'):
            flags['dims'] = [int(d) for d in options['dims'].split(',')]
        return flags
