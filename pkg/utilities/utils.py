import logging
import inspect
import os
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import softest
from openpyxl import Workbook, load_workbook

LOG_FILE_ENV = "MAGNUS_FOREST_LOG"
LOG_LEVEL_ENV = "MAGNUS_FOREST_LOG_LEVEL"
DEFAULT_LOG_FILE = "magnus_forest.log"


class Utils(softest.TestCase):
    """
    Utility class extending softest.TestCase to provide common checking functionalities,
    including soft assertions over coefficient tables, logging and Excel data I/O.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.logger = self.custom_logger()

    def assert_coefficient_table(self, rows: Iterable[Sequence], expected: dict) -> None:
        """
        Asserts that each (label, coefficient) row matches the expected coefficient for its label.

        Every row is checked with a soft assertion so that all mismatching labels are reported
        together instead of stopping at the first one.

        Args:
            rows (Iterable[Sequence]): Rows whose first item is a label and last item a coefficient.
            expected (dict): Mapping from label to the expected coefficient.

        Raises:
            AssertionError: Aggregated assertion errors if any coefficient does not match.
        """
        self.logger.debug(f"Starting coefficient table assertion against {len(expected)} expected values")

        for index, row in enumerate(rows, start=1):
            label, actual = row[0], Fraction(row[-1])
            if label not in expected:
                continue
            self.soft_assert(
                self.assertEqual,
                actual,
                Fraction(expected[label]),
                f"Row {index} ({label}): expected {expected[label]}, but got {actual}"
            )

        try:
            self.assert_all()
            self.logger.debug("All coefficient rows matched.")
        except AssertionError as e:
            self.logger.error("One or more coefficient rows failed.", exc_info=True)
            raise e

    @staticmethod
    def custom_logger(name: Optional[str] = None, log_level: Optional[int] = None) -> logging.Logger:
        """
        Creates and returns a custom logger.

        The logger writes to the file named by MAGNUS_FOREST_LOG (default 'magnus_forest.log';
        an empty value disables the file) and to stderr, with a common format. Handlers are
        attached only once per logger name.

        Args:
            name (Optional[str]): Logger name; defaults to the caller's module.
            log_level (Optional[int]): Logging level; defaults to MAGNUS_FOREST_LOG_LEVEL or INFO.

        Returns:
            logging.Logger: Configured logger instance.
        """
        if name is None:
            # Name the logger after the calling module
            caller = inspect.currentframe().f_back
            name = caller.f_globals.get("__name__", "magnus_forest")
        if log_level is None:
            log_level = logging.getLevelName(os.environ.get(LOG_LEVEL_ENV, "INFO").upper())
            if not isinstance(log_level, int):
                log_level = logging.INFO

        logger = logging.getLogger(name)
        logger.setLevel(log_level)

        # Avoid adding multiple handlers if the logger already has one
        if not logger.handlers:
            formatter = logging.Formatter(
                '%(asctime)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s',
                datefmt='%Y-%m-%d %H:%M:%S'
            )
            log_file = os.environ.get(LOG_FILE_ENV, DEFAULT_LOG_FILE)
            if log_file:
                fh = logging.FileHandler(log_file, mode='a')
                fh.setFormatter(formatter)
                logger.addHandler(fh)

            # stderr only: stdout carries command output
            sh = logging.StreamHandler()
            sh.setFormatter(formatter)
            logger.addHandler(sh)
            logger.propagate = False

        return logger

    def read_coefficient_table(self, excel_file: str, sheet: str) -> Optional[Dict[str, Fraction]]:
        """
        Reads a coefficient sheet written by `--format xlsx` back into exact coefficients.

        The first row is the header; the label is the first column and the coefficient the
        column headed 'coefficient'. Cells hold rationals as 'p/q' strings or integers.

        Args:
            excel_file (str): Path to the Excel file.
            sheet (str): Sheet name, e.g. 'theorem' or 'permutation'.

        Returns:
            Optional[Dict[str, Fraction]]: Label → coefficient if successful; otherwise, None.
        """
        self.logger.debug(f"Reading coefficient table '{sheet}' from '{excel_file}'")
        table: Dict[str, Fraction] = {}

        try:
            wb = load_workbook(filename=excel_file, data_only=True)
            rows = wb[sheet].iter_rows(values_only=True)
            header = [str(cell) for cell in next(rows)]
            column = header.index("coefficient")
            for index, row in enumerate(rows, start=2):
                label = str(row[0])
                if label in table:
                    raise ValueError(f"row {index} repeats label '{label}'")
                table[label] = Fraction(str(row[column]))

        except FileNotFoundError:
            self.logger.error(f"Error: The file '{excel_file}' was not found.")
            return None
        except KeyError:
            self.logger.error(f"Error: The sheet '{sheet}' does not exist in the workbook '{excel_file}'.")
            return None
        except (StopIteration, ValueError, ZeroDivisionError) as e:
            self.logger.error(f"Sheet '{sheet}' is not a coefficient table: {e}")
            return None
        else:
            self.logger.info(f"Read {len(table)} coefficients from '{excel_file}' sheet '{sheet}'.")
            return table

    @staticmethod
    def write_data_to_excel_file(excel_file: str, sheets: Mapping[str, Tuple[Sequence[str], Iterable[Sequence]]]) -> int:
        """
        Writes one sheet per table into a new workbook, header row first.

        Args:
            excel_file (str): Destination path.
            sheets (Mapping[str, Tuple[Sequence[str], Iterable[Sequence]]]): Sheet title → (header, rows).

        Returns:
            int: Total number of data rows written.
        """
        wb = Workbook()
        wb.remove(wb.active)
        count = 0
        for title, (header, rows) in sheets.items():
            sh = wb.create_sheet(title=title[:31])
            sh.append(list(header))
            for row in rows:
                sh.append(list(row))
                count += 1
        wb.save(excel_file)
        return count
