class DataError(Exception):
    """Manifest or image contents unusable for training/prediction."""
