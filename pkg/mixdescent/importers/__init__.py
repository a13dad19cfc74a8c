from .libsvm import SIGNED_LABELS, DatasetImporter, LibsvmImporter, load_libsvm, standardize_features, write_libsvm
