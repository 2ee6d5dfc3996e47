import pathlib
from collections.abc import Iterable
from typing import Self

from ._coding import DigitWord


class DigitWordReader:
    def __init__(self, *, file_path: str | pathlib.Path, maximum_buffer_size_in_bytes: int = 10**8) -> None:
        """
        Lazily read a file of comma-separated digit words using buffers of a specified size.

        Blank lines and lines starting with '#' are skipped.

        Parameters
        ----------
        file_path : string or pathlib.Path
            The path to the digit word file.
        maximum_buffer_size_in_bytes : int, default: 100 MB
            The theoretical maximum amount of RAM (in bytes) to use on each buffer iteration.
        """
        self.file_path = pathlib.Path(file_path)
        self.maximum_buffer_size_in_bytes = maximum_buffer_size_in_bytes

        # Parsing into integers roughly doubles the footprint of each raw line
        self.buffer_size_in_bytes = max(1, maximum_buffer_size_in_bytes // 2)

        self.total_file_size = self.file_path.stat().st_size
        self.offset = 0
        self.line_number = 0

    def __iter__(self) -> Self:
        return self

    def __next__(self) -> list[DigitWord]:
        """Parse the next buffer of complete lines, or raise StopIteration once the file is exhausted."""
        if self.offset >= self.total_file_size:
            raise StopIteration

        with open(file=self.file_path, mode="rb", buffering=0) as io:
            io.seek(self.offset)
            intermediate_bytes = io.read(self.buffer_size_in_bytes)

        at_end_of_file = self.offset + len(intermediate_bytes) >= self.total_file_size
        if at_end_of_file:
            complete_bytes = intermediate_bytes
        else:
            last_line_break = intermediate_bytes.rfind(b"\n")
            if last_line_break == -1:
                message = (
                    f"DigitWordReader encountered a line at offset {self.offset} that exceeds the buffer size! "
                    "Try increasing the `maximum_buffer_size_in_bytes` to account for this line."
                )
                raise ValueError(message)
            complete_bytes = intermediate_bytes[: last_line_break + 1]

        self.offset += len(complete_bytes)

        words = []
        for line in complete_bytes.decode().splitlines():
            self.line_number += 1
            if line.strip() == "" or line.lstrip().startswith("#"):
                continue
            try:
                words.append(DigitWord.from_line(line))
            except ValueError as exception:
                message = f"Line {self.line_number} of '{self.file_path}': {exception}"
                raise ValueError(message) from exception

        return words


def read_digit_words(
    file_path: str | pathlib.Path, *, maximum_buffer_size_in_bytes: int = 10**8
) -> list[DigitWord]:
    """Read every digit word from a file of comma-separated integer lines."""
    return [
        word
        for buffer in DigitWordReader(file_path=file_path, maximum_buffer_size_in_bytes=maximum_buffer_size_in_bytes)
        for word in buffer
    ]


def write_digit_words(words: Iterable[DigitWord], file_path: str | pathlib.Path) -> None:
    """Write one comma-separated line per word; digits above 2^63 are written in log-scaled notation."""
    with open(file=file_path, mode="w") as io:
        for word in words:
            io.write(f"{word.to_line()}\n")

    return None
