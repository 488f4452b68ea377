from tqdm import tqdm as tqdm_base

__all__ = ['progress']


def progress(iterable=None, verbose: bool = False, **kwargs):
    """`tqdm` over `iterable`, silent unless `verbose`.

    Stale bars left by an interrupted loop are released first.
    """
    if hasattr(tqdm_base, '_instances'):
        for instance in list(tqdm_base._instances):
            tqdm_base._decr_instances(instance)
    return tqdm_base(iterable, disable=not verbose, **kwargs)
