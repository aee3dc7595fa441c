from munch import Munch as MBunch


def flags_from_options(options, **defaults):
    """
    Command option dict -> attribute-access bundle.
    ``None`` options fall back to ``defaults`` so settings apply when a flag is omitted.
    """
    flags = MBunch(defaults)
    for key, value in options.items():
        if value is not None or key not in flags:
            flags[key] = value
    return flags
