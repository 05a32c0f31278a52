import os
import unittest

import yaml

from snpeaks.apis import ResultStore
from snpeaks.utils.common import (generate_tempdir, read_table,
                                  read_table_header)


class ResultStoreTestCase(unittest.TestCase):
    """
    """

    def test_tables(self):
        with generate_tempdir() as tmpdir:
            store = ResultStore(tmpdir, config_hash='abc')
            rows = [{'eps': 0.1, 'value': 1.5}, {'eps': 0.05, 'value': 0.375}]
            path = store.push_table('fit.csv', rows, header={'fit': 'normal'})

            self.assertTrue(store.have('fit.csv'))
            self.assertEqual(path, store.path('fit.csv'))
            header = read_table_header(path)
            self.assertEqual(header['config_hash'], 'abc')
            self.assertEqual(header['fit'], 'normal')
            frame = read_table(path)
            self.assertEqual(list(frame.columns), ['eps', 'value'])
            self.assertAlmostEqual(frame['value'][1], 0.375)

            with open(path) as file:
                first = file.read()
            store.push_table('fit.csv', rows, header={'fit': 'normal'})
            with open(path) as file:
                self.assertEqual(file.read(), first)

    def test_meta(self):
        with generate_tempdir() as tmpdir:
            store = ResultStore(tmpdir, config_hash='abc')
            store.push_text('notes.txt', 'hello')
            store.subdir('bundle')
            self.assertTrue(store.record('a_star', 88.5))

            with open(store.metafile) as file:
                meta = yaml.safe_load(file)
            self.assertEqual(meta['config_hash'], 'abc')
            self.assertEqual(meta['artifacts'], ['bundle', 'notes.txt'])
            self.assertEqual(meta['a_star'], 88.5)

            reopened = ResultStore(tmpdir, config_hash='abc')
            self.assertTrue(reopened.have('notes.txt'))
            self.assertEqual(reopened.meta['a_star'], 88.5)

    def test_other_config(self):
        with generate_tempdir() as tmpdir:
            store = ResultStore(tmpdir, config_hash='abc')
            store.push_text('notes.txt', 'hello')
            store.record('a_star', 88.5)

            other = ResultStore(tmpdir, config_hash='def')
            self.assertFalse(other.have('notes.txt'))
            self.assertNotIn('a_star', other.meta)
            self.assertEqual(other.meta['config_hash'], 'def')

    def test_overwrite(self):
        with generate_tempdir() as tmpdir:
            store = ResultStore(tmpdir, overwrite=False)
            self.assertTrue(store.record('key', 1))
            self.assertFalse(store.record('key', 2))
            self.assertEqual(store.meta['key'], 1)

    def test_adopt(self):
        with generate_tempdir() as tmpdir:
            store = ResultStore(tmpdir)
            with self.assertRaises(FileNotFoundError):
                store.adopt('plot.gp')

            with open(os.path.join(tmpdir, 'plot.gp'), 'w') as file:
                file.write('plot x\n')
            store.adopt('plot.gp')
            self.assertTrue(store.have('plot.gp'))


if __name__ == "__main__":
    unittest.main()
