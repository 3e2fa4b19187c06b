"""File sharding, repair, reconstruction, cluster simulation and comparison tables."""

from .codecs import Codec, build_codec
from .files import BandwidthLedger, cmd_encode, cmd_reconstruct, cmd_repair
from .manifest import Manifest, ShareFile
from .simulate import cmd_simulate, parse_script, random_script
from .tables import cmd_tables

__all__ = [
    "BandwidthLedger", "Codec", "Manifest", "ShareFile", "build_codec", "cmd_encode", "cmd_reconstruct",
    "cmd_repair", "cmd_simulate", "cmd_tables", "parse_script", "random_script",
]
