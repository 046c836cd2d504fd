"""Content-Length framing: exact bytes, round trips, malformed input."""

import io

import pytest
from hypothesis import given, settings, strategies as st

from verdap.dap.wire import decode_message, encode_message, FramingError, JsonError


class TestEncode:
    def test_exact_framing_bytes(self):
        assert encode_message({}) == b"Content-Length: 2\r\n\r\n{}"

    def test_utf8_length_counts_bytes_not_chars(self):
        payload = {"text": "π"}
        encoded = encode_message(payload)
        header, _, body = encoded.partition(b"\r\n\r\n")
        assert header == f"Content-Length: {len(body)}".encode()


class TestDecode:
    def test_round_trip(self):
        message = {"seq": 1, "type": "request", "command": "launch", "extra": [1, {"a": None}]}
        assert decode_message(io.BytesIO(encode_message(message))) == message

    def test_unknown_fields_preserved(self):
        message = {"seq": 1, "type": "event", "event": "custom", "vendorPayload": {"x": 1}}
        decoded = decode_message(io.BytesIO(encode_message(message)))
        assert decoded["vendorPayload"] == {"x": 1}

    def test_multiple_messages_in_sequence(self):
        stream = io.BytesIO(encode_message({"seq": 1}) + encode_message({"seq": 2}))
        assert decode_message(stream) == {"seq": 1}
        assert decode_message(stream) == {"seq": 2}

    def test_clean_eof_returns_none(self):
        assert decode_message(io.BytesIO(b"")) is None

    def test_extra_headers_ignored(self):
        body = b'{"seq": 3}'
        raw = (
            b"Content-Type: application/json\r\n"
            + f"Content-Length: {len(body)}\r\n\r\n".encode()
            + body
        )
        assert decode_message(io.BytesIO(raw)) == {"seq": 3}

    def test_malformed_length_raises(self):
        raw = b"Content-Length: abc\r\n\r\n{}"
        with pytest.raises(FramingError):
            decode_message(io.BytesIO(raw))

    def test_missing_length_raises(self):
        with pytest.raises(FramingError):
            decode_message(io.BytesIO(b"Content-Type: x\r\n\r\n{}"))

    def test_short_read_raises(self):
        with pytest.raises(FramingError):
            decode_message(io.BytesIO(b"Content-Length: 50\r\n\r\n{}"))

    def test_bad_json_raises_json_error(self):
        body = b"{nope"
        raw = f"Content-Length: {len(body)}\r\n\r\n".encode() + body
        with pytest.raises(JsonError):
            decode_message(io.BytesIO(raw))

    def test_garbled_header_raises(self):
        with pytest.raises(FramingError):
            decode_message(io.BytesIO(b"garbage without colon\r\n\r\n{}"))


json_values = st.recursive(
    st.none() | st.booleans() | st.integers(-10**6, 10**6) | st.text(max_size=20),
    lambda children: st.lists(children, max_size=4)
    | st.dictionaries(st.text(max_size=8), children, max_size=4),
    max_leaves=10,
)


class TestRoundTripProperty:
    @given(st.dictionaries(st.text(min_size=1, max_size=10), json_values, max_size=6))
    @settings(max_examples=100, deadline=None)
    def test_decode_inverts_encode(self, message):
        assert decode_message(io.BytesIO(encode_message(message))) == message
