"""Audio duration extraction from container headers, without decoding.

WAV and FLAC durations are exact (data-chunk size over byte rate,
STREAMINFO sample count over sample rate). MP3 has no duration field, so
frames are scanned and summed; the result is flagged approximate.
"""

from __future__ import annotations

import struct
from enum import Enum
from pathlib import Path


class AudioError(Exception):
    """Header unreadable or duration not derivable."""


class AudioFormat(str, Enum):
    WAV = "wav"
    FLAC = "flac"
    MP3 = "mp3"


EXTENSIONS = {".wav": AudioFormat.WAV, ".flac": AudioFormat.FLAC, ".mp3": AudioFormat.MP3}


def wav_duration(data: bytes) -> float:
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise AudioError("not a RIFF/WAVE file")
    byte_rate = None
    data_size = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (chunk_size,) = struct.unpack("<I", data[pos + 4 : pos + 8])
        body = data[pos + 8 : pos + 8 + chunk_size]
        if chunk_id == b"fmt " and len(body) >= 16:
            (byte_rate,) = struct.unpack("<I", body[8:12])
        elif chunk_id == b"data":
            data_size = chunk_size
        pos += 8 + chunk_size + (chunk_size & 1)  # chunks are word-aligned
    if byte_rate is None or data_size is None:
        raise AudioError("missing fmt or data chunk")
    if byte_rate == 0:
        raise AudioError("zero byte rate")
    return data_size / byte_rate


def flac_duration(data: bytes) -> float:
    if data[:4] != b"fLaC":
        raise AudioError("not a FLAC file")
    pos = 4
    while pos + 4 <= len(data):
        header = data[pos]
        block_type = header & 0x7F
        size = int.from_bytes(data[pos + 1 : pos + 4], "big")
        body = data[pos + 4 : pos + 4 + size]
        if block_type == 0:  # STREAMINFO
            if len(body) < 18:
                raise AudioError("truncated STREAMINFO")
            packed = int.from_bytes(body[10:18], "big")
            sample_rate = packed >> 44
            total_samples = packed & ((1 << 36) - 1)
            if sample_rate == 0:
                raise AudioError("zero sample rate")
            if total_samples == 0:
                raise AudioError("unknown total sample count")
            return total_samples / sample_rate
        if header & 0x80:  # last metadata block
            break
        pos += 4 + size
    raise AudioError("no STREAMINFO block")


_MP3_BITRATES = {
    # (mpeg1, layer) -> kbps by index 1..14
    (1, 3): (32, 40, 48, 56, 64, 80, 96, 112, 128, 160, 192, 224, 256, 320),
    (1, 2): (32, 48, 56, 64, 80, 96, 112, 128, 160, 192, 224, 256, 320, 384),
    (1, 1): (32, 64, 96, 128, 160, 192, 224, 256, 288, 320, 352, 384, 416, 448),
    (2, 3): (8, 16, 24, 32, 40, 48, 56, 64, 80, 96, 112, 128, 144, 160),
    (2, 2): (8, 16, 24, 32, 40, 48, 56, 64, 80, 96, 112, 128, 144, 160),
    (2, 1): (32, 48, 56, 64, 80, 96, 112, 128, 144, 160, 176, 192, 224, 256),
}

_MP3_RATES = {3: (44100, 48000, 32000), 2: (22050, 24000, 16000), 0: (11025, 12000, 8000)}


def mp3_duration(data: bytes) -> float:
    """Frame-header scan; approximate by nature (resyncs over garbage,
    trusts per-frame headers)."""
    pos = 0
    if data[:3] == b"ID3" and len(data) >= 10:
        size = 0
        for b in data[6:10]:  # synchsafe integer
            size = (size << 7) | (b & 0x7F)
        pos = 10 + size
    seconds = 0.0
    frames = 0
    while pos + 4 <= len(data):
        if data[pos] != 0xFF or (data[pos + 1] & 0xE0) != 0xE0:
            pos += 1
            continue
        b1, b2 = data[pos + 1], data[pos + 2]
        version_bits = (b1 >> 3) & 0x3  # 0: MPEG2.5, 2: MPEG2, 3: MPEG1
        layer_bits = (b1 >> 1) & 0x3  # 1: III, 2: II, 3: I
        bitrate_index = (b2 >> 4) & 0xF
        rate_index = (b2 >> 2) & 0x3
        padding = (b2 >> 1) & 0x1
        if version_bits == 1 or layer_bits == 0 or bitrate_index in (0, 15) or rate_index == 3:
            pos += 1
            continue
        mpeg = 1 if version_bits == 3 else 2
        layer = 4 - layer_bits
        bitrate = _MP3_BITRATES[(mpeg, layer)][bitrate_index - 1] * 1000
        sample_rate = _MP3_RATES[version_bits][rate_index]
        if layer == 1:
            frame_size = (12 * bitrate // sample_rate + padding) * 4
            samples = 384
        else:
            samples = 1152 if (layer == 2 or mpeg == 1) else 576
            per_frame = 144 if samples == 1152 else 72
            frame_size = per_frame * bitrate // sample_rate + padding
        if frame_size <= 0:
            pos += 1
            continue
        seconds += samples / sample_rate
        frames += 1
        pos += frame_size
    if frames == 0:
        raise AudioError("no MP3 frames found")
    return seconds


def duration_of(path: Path) -> tuple[float, bool]:
    """(duration in seconds, whether it is approximate) for a WAV, FLAC or
    MP3 file, judged by extension."""
    fmt = EXTENSIONS.get(Path(path).suffix.lower())
    if fmt is None:
        raise AudioError(f"unsupported extension: {path}")
    data = Path(path).read_bytes()
    if fmt is AudioFormat.WAV:
        return wav_duration(data), False
    if fmt is AudioFormat.FLAC:
        return flac_duration(data), False
    return mp3_duration(data), True
