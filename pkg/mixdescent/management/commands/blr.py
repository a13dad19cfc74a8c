from mixdescent.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = 'Runs the Bayesian logistic regression experiment on a libsvm dataset'
    experiment = 'blr'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--dataset', dest='dataset_path', type=str, help='Path of the libsvm file')
        parser.add_argument('--full', dest='full', action='store_true', default=None,
                            help='Use the whole dataset instead of the fixed subsample')

    def flags(self, options):
        flags = super().flags(options)
        flags.update(dataset_path=options.get('dataset_path'), full=options.get('full'))
        return flags
