from .coding_vector import CodingVector, generate_coding_vector
from .encoder import Encoder, Generation, encode
from .decoder import DecoderState, IngestOutcome, decoder_ingest, decode_generation

__all__ = [
    'CodingVector', 'generate_coding_vector',
    'Encoder', 'Generation', 'encode',
    'DecoderState', 'IngestOutcome', 'decoder_ingest', 'decode_generation',
]
