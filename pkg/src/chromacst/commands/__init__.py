from chromacst.commands.evaluate import EvalCommand
from chromacst.commands.lut import LutCommand
from chromacst.commands.report import ReportCommand
from chromacst.commands.synth import SynthCommand
from chromacst.commands.train import TrainCommand

COMMANDS = [
    SynthCommand,
    TrainCommand,
    EvalCommand,
    LutCommand,
    ReportCommand,
]
