import fast_lyapunov_spectra
from fast_lyapunov_spectra._error_collection import _collect_error


def test_records_are_appended_with_a_header():
    first_path = _collect_error(message="Chunk 0 failed!", error_type="parallel", task_id="abcde")
    second_path = _collect_error(message="Chunk 1 failed!", error_type="parallel", task_id="abcde")

    assert first_path == second_path
    assert first_path.parent == fast_lyapunov_spectra.FAST_LYAPUNOV_SPECTRA_BASE_FOLDER_PATH / "errors"
    assert first_path.name.endswith("_parallel_errors_abcde.txt")

    first_header, first_message, _, second_header, second_message, _ = first_path.read_text().splitlines()[-6:]
    assert (first_message, second_message) == ("Chunk 0 failed!", "Chunk 1 failed!")
    for header in (first_header, second_header):
        assert header.startswith("[")
        assert header.endswith("] parallel (abcde)")


def test_hypothesis_records_have_no_task_id():
    error_collection_file_path = _collect_error(message="Map 'custom' fails at finite scale.", error_type="hypothesis")

    assert error_collection_file_path.name.endswith("_hypothesis_errors.txt")
    assert error_collection_file_path.read_text().splitlines()[-3].endswith("] hypothesis")
