"""Tests for progress indicator functionality."""
import unittest
import time
from unittest.mock import patch
from ell_loewner.progress import ProgressIndicator


class TestProgressIndicator(unittest.TestCase):
    """Test cases for progress indicator."""

    def test_init(self):
        """Test progress indicator initialization."""
        progress = ProgressIndicator("Test")
        self.assertEqual(progress.message, "Test")
        self.assertFalse(progress.running)
        self.assertIsNone(progress.thread)
        self.assertEqual(progress.done, 0)

    def test_start_stop(self):
        """Test starting and stopping the progress indicator."""
        progress = ProgressIndicator("Processing")

        with patch('sys.stdout.write') as mock_write:
            progress.start()
            self.assertTrue(progress.running)
            self.assertIsNotNone(progress.thread)

            # Give it time to make at least one update
            time.sleep(0.6)

            progress.stop()
            self.assertFalse(progress.running)

            mock_write.assert_called()
            # The line is blanked and the cursor returned at the end
            last = mock_write.call_args_list[-1][0][0]
            self.assertTrue(last.startswith('\r'))
            self.assertTrue(last.endswith('\r'))
            self.assertEqual(last.strip(), '')

    def test_counter(self):
        """Test the done/total counter in the label."""
        progress = ProgressIndicator("Verifying", total=10)

        with patch('sys.stdout.write') as mock_write:
            progress.start()
            progress.advance(3)
            time.sleep(0.6)
            progress.stop()

            calls = [call[0][0] for call in mock_write.call_args_list]
            self.assertTrue(any('Verifying [3/10]' in call for call in calls))

    def test_update_is_monotone(self):
        """Test that update never moves the counter backwards."""
        progress = ProgressIndicator(total=5, enabled=False)
        progress.update(4)
        progress.update(2)
        self.assertEqual(progress.done, 4)
        progress.advance()
        self.assertEqual(progress.done, 5)

    def test_disabled(self):
        """Test that a disabled indicator writes nothing."""
        with patch('sys.stdout.write') as mock_write:
            with ProgressIndicator("Quiet", enabled=False) as progress:
                progress.advance()
            mock_write.assert_not_called()
        self.assertIsNone(progress.thread)

    def test_animation_cycle(self):
        """Test that the animation cycles through dots."""
        progress = ProgressIndicator()

        with patch('sys.stdout.write') as mock_write:
            progress.start()
            # Wait for two full cycles
            time.sleep(2.1)
            progress.stop()

            calls = [call[0][0] for call in mock_write.call_args_list]
            patterns = set()
            for call in calls:
                for dots in ('   ', '.  ', '.. ', '...'):
                    if call.startswith('\rWorking') and call.endswith(dots):
                        patterns.add(dots)

            # Should have used at least 3 different patterns
            self.assertGreaterEqual(len(patterns), 3)


if __name__ == '__main__':
    unittest.main()
