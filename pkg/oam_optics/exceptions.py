"Exceptions raised by the oam_optics package"


class OAMOpticsError(Exception):
    "Base class for all the errors raised by oam_optics"


class NotUnitaryError(OAMOpticsError):
    pass


class ShapeError(OAMOpticsError):
    pass


class WindowError(OAMOpticsError):
    "A mode lies outside the simulation window"


class WindowMismatchError(OAMOpticsError):
    pass


class NetlistError(OAMOpticsError):
    "Malformed element or netlist"


class SchemaError(OAMOpticsError):
    "Netlist document that does not follow the JSON schema"

    def __init__(self, path, message):
        self.path = path
        super().__init__('{0}: {1}'.format(path, message))


class LeakageError(OAMOpticsError):
    "Amplitude left the output window during a transfer-matrix computation"

    def __init__(self, mode, norm):
        self.mode = mode
        self.norm = norm
        super().__init__('Input mode {0} keeps only norm {1:.3e} inside the output window'
                         .format(mode, norm))


class SwapDomainError(OAMOpticsError):
    "Input outside the subspace on which the ideal swap is defined"


class RegimeError(OAMOpticsError):
    "Parameters outside the verified regime of a construction or formula"


class RationalityError(OAMOpticsError):
    pass


class VerificationError(OAMOpticsError):
    "Netlist that cannot be compared with its target"
