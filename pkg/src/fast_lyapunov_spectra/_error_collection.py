import datetime
import importlib.metadata
import pathlib

from ._config import FAST_LYAPUNOV_SPECTRA_BASE_FOLDER_PATH


def _package_version() -> str:
    try:
        return importlib.metadata.version(distribution_name="fast_lyapunov_spectra")
    except importlib.metadata.PackageNotFoundError:
        return "unknown"


def _collect_error(message: str, error_type: str, task_id: str | None = None) -> pathlib.Path:
    """
    Append a timestamped diagnostic record to the error collection of the base folder.

    Parameters
    ----------
    message : str
        The body of the record.
    error_type : str
        "hypothesis" for finite-scale hypothesis failures accepted with `allow_violations`, "parallel" for failures
        inside worker processes. Part of the collection file name.
    task_id : str or None, optional
        Distinguishes the workers of one batch; part of the collection file name.

    Returns
    -------
    pathlib.Path
        The collection file the record was appended to.
    """
    errors_folder_path = FAST_LYAPUNOV_SPECTRA_BASE_FOLDER_PATH / "errors"
    errors_folder_path.mkdir(exist_ok=True)

    now = datetime.datetime.now()
    file_name_parts = [f"v{_package_version()}", now.strftime("%y%m%d"), error_type, "errors"]
    if task_id is not None:
        file_name_parts.append(task_id)
    error_collection_file_path = errors_folder_path / f"{'_'.join(file_name_parts)}.txt"

    header = f"[{now.isoformat(timespec='seconds')}] {error_type}" + (f" ({task_id})" if task_id is not None else "")
    with open(file=error_collection_file_path, mode="a") as io:
        io.write(f"{header}\n{message}\n\n")

    return error_collection_file_path
