import unittest

from snpeaks.apis import JobResult, run_jobs
from snpeaks.errors import DegeneracyError, DomainError


def _square(x):
    return x * x


def _checked(x):
    if x < 0:
        raise DomainError('negative input {}'.format(x))
    if x == 0:
        raise DegeneracyError('zero input')
    if x > 100:
        raise KeyError(x)
    return x + 1


class RunJobsTestCase(unittest.TestCase):
    """
    """

    def test_serial(self):
        results = run_jobs(_square, [1, 2, 3])
        self.assertEqual([r.index for r in results], [0, 1, 2])
        self.assertEqual([r.unwrap() for r in results], [1, 4, 9])
        self.assertTrue(all(r.ok for r in results))

    def test_workers(self):
        jobs = list(range(12))
        serial = [r.value for r in run_jobs(_square, jobs, workers=1)]
        parallel = run_jobs(_square, jobs, workers=3)
        self.assertEqual([r.index for r in parallel], jobs)
        self.assertEqual([r.value for r in parallel], serial)

    def test_failures_are_captured(self):
        results = run_jobs(_checked, [1, -1, 0, 101, 2])
        self.assertEqual([r.ok for r in results],
                         [True, False, False, False, True])
        self.assertEqual(results[1].error_type, 'DomainError')
        self.assertEqual(results[4].unwrap(), 3)

        with self.assertRaises(DomainError):
            results[1].unwrap()
        with self.assertRaises(DegeneracyError):
            results[2].unwrap()
        with self.assertRaises(RuntimeError):
            results[3].unwrap()

    def test_failures_across_workers(self):
        results = run_jobs(_checked, [-2, 5], workers=2)
        self.assertFalse(results[0].ok)
        self.assertEqual(results[0].error_type, 'DomainError')
        self.assertEqual(results[1].value, 6)

    def test_job_result(self):
        result = JobResult(index=0, error='boom', error_type='NotALabError')
        self.assertFalse(result.ok)
        with self.assertRaises(RuntimeError):
            result.unwrap()
        self.assertEqual(run_jobs(_square, []), [])


if __name__ == "__main__":
    unittest.main()
