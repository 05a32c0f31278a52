import unittest

from snpeaks.apis import FlowScheduler


class SchedulerTestCase(unittest.TestCase):
    """
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.scheduler = FlowScheduler(
            log_interval=5, check_interval=10, trace_interval=2, warmup=10)

    def test_status(self):
        for i in range(1, 31):
            status = self.scheduler.step()
            self.assertEqual(status.do_log, i % 5 == 0)
            self.assertEqual(status.record_trace, i % 2 == 0)
            # the first check falls after the warmup
            self.assertEqual(status.do_check, i in (20, 30))

    def test_explicit_iteration(self):
        scheduler = FlowScheduler(log_interval=0)
        status = scheduler.step(7)
        self.assertEqual(scheduler.cur_iter, 7)
        self.assertFalse(status.do_log)
        self.assertTrue(status.do_check)


if __name__ == "__main__":
    unittest.main()
