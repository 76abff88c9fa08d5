import pytest

from storage.repository import ResultRepository


@pytest.fixture
def repository(tmp_path):
    return ResultRepository(tmp_path / "runs" / "results.db")


def test_store_and_get(repository):
    run_id = repository.store_run('eig', {'n': 3, 'r': 2.0}, {'lambda1': 3.4674011003})
    run = repository.get_run(run_id)
    assert run['command'] == 'eig'
    assert run['parameters'] == {'n': 3, 'r': 2.0}
    assert run['payload'] == {'lambda1': 3.4674011003}
    assert run['passed'] is None
    assert run['created_at']


def test_verify_outcome_is_kept(repository):
    run_id = repository.store_run('verify', {}, [{'check_name': 'n3_exactness'}], passed=False)
    assert repository.get_run(run_id)['passed'] is False


def test_list_runs_newest_first(repository):
    ids = [repository.store_run(command, {}, None) for command in ('eig', 'sweep', 'eig')]
    runs = repository.list_runs()
    assert [run['id'] for run in runs] == ids[::-1]
    assert all('payload' not in run for run in runs)
    assert [run['id'] for run in repository.list_runs('eig')] == [ids[2], ids[0]]
    assert len(repository.list_runs(limit=1)) == 1


def test_delete_run(repository):
    run_id = repository.store_run('horoconvex', {'n': 2, 'D': 10.0}, {})
    assert repository.delete_run(run_id)
    assert repository.get_run(run_id) is None
    assert not repository.delete_run(run_id)


def test_unknown_command_rejected(repository):
    with pytest.raises(ValueError):
        repository.store_run('history', {}, None)


def test_missing_run(repository):
    assert repository.get_run(42) is None
    assert repository.list_runs() == []
