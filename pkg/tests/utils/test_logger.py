import unittest

from snpeaks.utils.logger import logger
from snpeaks.utils.timer import Timer


class LoggerTestCase(unittest.TestCase):
    """
    """

    def test_iteration(self):
        with self.assertLogs('snpeaks', level='INFO') as logs:
            logger.iteration('SCF', 12, 400, '00:00:04', t=1.0,
                             residual=3.1e-9)
            logger.iteration('Newton', 3, halvings=0)
        self.assertEqual(logs.records[0].getMessage(),
                         '[SCF] iter=12/400 t=1 residual=3.100e-09 '
                         'eta=00:00:04')
        self.assertEqual(logs.records[1].getMessage(),
                         '[Newton] iter=3 halvings=0')

    def test_quiet(self):
        with self.assertLogs('snpeaks', level='DEBUG') as logs:
            with logger.quiet():
                logger.info('dropped')
                logger.error('kept')
            logger.info('after')
        self.assertEqual([r.getMessage() for r in logs.records],
                         ['kept', 'after'])

    def test_enumerate(self):
        with self.assertLogs('snpeaks', level='INFO') as logs:
            items = [item for _, item in logger.enumerate(['a', 'b'], 'Ladder')]
        self.assertEqual(items, ['a', 'b'])
        messages = [r.getMessage() for r in logs.records]
        self.assertEqual(messages[:2], ['Ladder [1/2]', 'Ladder [2/2]'])
        self.assertTrue(messages[2].startswith('Ladder done in'))

    def test_set_level(self):
        with self.assertRaises(ValueError):
            logger.set_level('verbose')


class TimerTestCase(unittest.TestCase):
    """
    """

    def test_eta(self):
        timer = Timer(iters=10)
        self.assertEqual(timer.eta, '--:--:--')
        for _ in range(3):
            timer.step()
        self.assertEqual(timer.cur_iter, 3)
        self.assertRegex(timer.eta, r'^\d\d:\d\d:\d\d$')
        self.assertGreaterEqual(timer.speed, 0.)
        self.assertEqual(Timer().eta, '--:--:--')


if __name__ == "__main__":
    unittest.main()
