import os
import tempfile
import unittest

import numpy as np

from pmoe.data import Dataset, dichotomize, read_csv, write_csv
from pmoe.errors import DataFormatError


class CsvTests(unittest.TestCase):
    """
    tests for reading and writing datasets as CSV
    """

    def setUp(self):
        self.dir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.dir.cleanup()

    def path(self, name):
        return os.path.join(self.dir.name, name)

    def write(self, name, text):
        with open(self.path(name), "w", encoding="utf-8") as f:
            f.write(text)
        return self.path(name)

    def test_round_trip(self):
        """
        tests that a written dataset reads back unchanged
        """
        rng = np.random.default_rng(0)
        ds = Dataset.from_raw(
            rng.normal(2.0, 3.0, (25, 4)), np.tile([0, 1], 13)[:25], rng.standard_normal(25)
        )
        write_csv(ds, self.path("ds.csv"))
        back = read_csv(self.path("ds.csv"), "y", "d")
        self.assertEqual(back.column_names, ds.column_names)
        np.testing.assert_allclose(back.x, ds.x, atol=1e-12)
        np.testing.assert_allclose(back.raw_x(), ds.raw_x(), atol=1e-12)
        np.testing.assert_array_equal(back.d, ds.d)
        np.testing.assert_allclose(back.y, ds.y, atol=1e-12)

    def test_treatment_spellings(self):
        """
        tests the accepted spellings of a binary treatment
        """
        p = self.write("t.csv", "y,d,a\n1.0,true,1\n2.0,FALSE,2\n3.5,1,4\n0.5,0.0,3\n")
        ds = read_csv(p, "y", "d")
        np.testing.assert_array_equal(ds.d, [1, 0, 1, 0])

    def test_non_binary_treatment(self):
        p = self.write("t.csv", "y,d,a\n1.0,1,1\n2.0,0,2\n3.5,2,4\n")
        with self.assertRaises(DataFormatError) as cm:
            read_csv(p, "y", "d")
        self.assertEqual(cm.exception.line, 4)
        self.assertIn("'2'", str(cm.exception))

    def test_bad_number(self):
        """
        tests that a non-numeric cell names its line and value
        """
        p = self.write("t.csv", "y,d,a\n1.0,1,1\n2.0,0,abc\n3.5,1,4\n")
        with self.assertRaises(DataFormatError) as cm:
            read_csv(p, "y", "d")
        self.assertEqual(cm.exception.line, 3)
        self.assertIn("abc", str(cm.exception))

    def test_missing_column(self):
        p = self.write("t.csv", "y,d,a\n1.0,1,1\n2.0,0,2\n")
        with self.assertRaises(DataFormatError):
            read_csv(p, "outcome", "d")
        with self.assertRaises(DataFormatError):
            read_csv(p, "y", "d", ["a", "b"])
        with self.assertRaises(DataFormatError):
            read_csv(p, "y", "y")

    def test_covariate_subset(self):
        p = self.write("t.csv", "a,y,b,d,c\n1,1.0,3,1,2\n2,2.0,1,0,5\n4,3.5,2,1,1\n")
        ds = read_csv(p, "y", "d", ["c", "a"])
        self.assertEqual(ds.column_names, ("c", "a"))

    def test_dichotomize(self):
        values = np.array([3.0, 1.0, 2.0, 5.0, 4.0])
        np.testing.assert_array_equal(dichotomize(values, "below-median"), [0, 1, 1, 0, 0])
        np.testing.assert_array_equal(dichotomize(values, "above-median"), [0, 0, 0, 1, 1])
        with self.assertRaises(DataFormatError):
            dichotomize(values, "mean")

    def test_read_dichotomized(self):
        p = self.write("t.csv", "y,life,a\n1,50.5,1\n2,70.1,2\n3,60.0,4\n4,80.2,3\n")
        ds = read_csv(p, "y", "life", dichotomize_mode="above-median")
        np.testing.assert_array_equal(ds.d, [0, 1, 0, 1])

    def test_empty_file(self):
        p = self.write("t.csv", "")
        with self.assertRaises(DataFormatError):
            read_csv(p, "y", "d")
