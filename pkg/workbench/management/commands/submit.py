from ...models import ConstructionRun
from ...run_service import start_run
from ..base import WorkbenchCommand


class Command(WorkbenchCommand):
    help = "Record a construction run for a formula and process it in the background"

    def add_command_arguments(self, parser):
        parser.add_argument('cnf')
        parser.add_argument('--chain-length', type=int)
        parser.add_argument('--wait', action='store_true', help="block until the run finishes")

    def run(self, cnf, chain_length=None, wait=False, **options):
        run = ConstructionRun.objects.create(formula=self.read(cnf), chain_length=chain_length)
        thread = start_run(run)
        if wait:
            thread.join()
            run.refresh_from_db()
        self.emit(run.as_dict(), [f"run {run.id}: {run.status}"])
        if wait and run.status == 'failed':
            self.check_failed(run.error_message)
