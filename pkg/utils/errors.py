class FlowOptError(ValueError):
    """Base class for errors raised on invalid inputs or numerical failures"""


class TopologyParseError(FlowOptError):
    def __init__(self, line_number, message):
        """
        Args:
            line_number (int): 1-based line of the topology file where parsing failed
            message (str): what is wrong with the line
        """
        super(TopologyParseError, self).__init__('line {line}: {message}'.format(line=line_number, message=message))
        self.line_number = line_number


class InfeasibleFlowError(FlowOptError):
    pass


class UndefinedDelayError(FlowOptError):
    pass


class LoadOutOfRangeError(FlowOptError):
    pass


class ModelFileError(FlowOptError):
    pass


class ModelVersionError(ModelFileError):
    pass


class ModelDimensionError(ModelFileError):
    pass


class DatasetSchemaError(FlowOptError):
    pass


class NonConvergenceError(FlowOptError):
    pass
