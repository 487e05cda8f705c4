"""Command-line interface tests, mostly in-process through main()."""

import json
import socket
import subprocess
import sys
import time
import urllib.request

import pytest

from fingerspell.cli import main
from fingerspell.io import encode_pgm, load_config
from fingerspell.synthetic import background, letter_a, letter_v


def write_pgm(path, img) -> None:
    path.write_bytes(encode_pgm(img))


@pytest.fixture
def v_image(tmp_path):
    path = tmp_path / "hand.pgm"
    write_pgm(path, letter_v())
    return path


def run_lines(capsys, argv) -> list[str]:
    assert main(argv) == 0
    return capsys.readouterr().out.splitlines()


# ---------------------------------------------------------------------------
# recognize


def test_brief_recognition_prints_only_the_letter(capsys, v_image):
    lines = run_lines(capsys, ["recognize", "--brief", str(v_image)])
    assert lines == ["V"]


def test_recognition_prints_the_wire_document(capsys, v_image):
    lines = run_lines(capsys, ["recognize", str(v_image)])
    assert len(lines) == 1
    doc = json.loads(lines[0])
    assert doc["letter"] == "V"
    assert doc["rule_id"] == "1d.angle.V"
    assert "overlay" in doc and "timings" in doc


def test_no_hand_still_completes_with_exit_zero(capsys, tmp_path):
    path = tmp_path / "empty.pgm"
    write_pgm(path, background())
    lines = run_lines(capsys, ["recognize", "--brief", str(path)])
    assert lines == ["unknown"]


def test_missing_file_exits_two(capsys, tmp_path):
    assert main(["recognize", str(tmp_path / "nope.pgm")]) == 2
    assert "error" in capsys.readouterr().err


def test_undecodable_file_exits_two(capsys, tmp_path):
    path = tmp_path / "noise.pgm"
    path.write_bytes(b"not an image at all")
    assert main(["recognize", str(path)]) == 2
    assert "cannot decode" in capsys.readouterr().err


def test_bad_flag_value_exits_three(v_image):
    with pytest.raises(SystemExit) as excinfo:
        main(["recognize", "--threshold", "999", str(v_image)])
    assert excinfo.value.code == 3


def test_unknown_subcommand_exits_three():
    with pytest.raises(SystemExit) as excinfo:
        main(["transcribe"])
    assert excinfo.value.code == 3


def test_threshold_and_otsu_are_mutually_exclusive(v_image):
    with pytest.raises(SystemExit) as excinfo:
        main(["recognize", "--threshold", "100", "--otsu", str(v_image)])
    assert excinfo.value.code == 3


def test_incoherent_hook_flags_exit_three(capsys, v_image):
    # A command template without the letter placeholder is a flag error.
    assert main(["recognize", "--hook-cmd", "say-it", str(v_image)]) == 3
    assert "{letter}" in capsys.readouterr().err


def test_incoherent_config_file_exits_two(capsys, v_image, tmp_path):
    conf = tmp_path / "app.conf"
    conf.write_text("hook.mode = file\n")  # file mode without a letter file
    assert main(["recognize", "--config", str(conf), str(v_image)]) == 2


def test_config_file_errors_exit_two(capsys, v_image, tmp_path):
    conf = tmp_path / "app.conf"
    conf.write_text("imagine.threshold = 10\n")
    assert main(["recognize", "--config", str(conf), str(v_image)]) == 2
    assert "unknown config key" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# batch


@pytest.fixture
def v_session_dir(tmp_path):
    directory = tmp_path / "frames"
    directory.mkdir()
    for i in range(5):
        write_pgm(directory / f"frame{i:03d}.pgm", letter_v())
    return directory


def test_batch_emits_one_line_per_frame_plus_summary(capsys, v_session_dir):
    lines = run_lines(capsys, ["batch", str(v_session_dir)])
    assert len(lines) == 6
    docs = [json.loads(line) for line in lines]
    for i, doc in enumerate(docs[:5]):
        assert doc["frame_index"] == i
        assert doc["file"] == f"frame{i:03d}.pgm"
        assert doc["t"] == pytest.approx(i / 10.0)
        assert doc["letter"] == "V"
    # The default five-frame window closes on the last frame.
    assert docs[4]["stable_letter"] == "V"
    summary = docs[5]["summary"]
    assert summary["frames"] == 5
    assert summary["emits"] == [{"letter": "V", "t": 0.4}]
    assert summary["a_o"] == pytest.approx(0.4 / 7.0 * 100.0)


def test_batch_output_is_identical_across_runs(capsys, v_session_dir):
    first = run_lines(capsys, ["batch", str(v_session_dir)])
    second = run_lines(capsys, ["batch", str(v_session_dir)])
    assert first == second


def test_batch_window_flag_shortens_the_debounce(capsys, v_session_dir):
    lines = run_lines(capsys, ["batch", "--window", "2", str(v_session_dir)])
    docs = [json.loads(line) for line in lines]
    assert docs[1]["stable_letter"] == "V"
    assert docs[5]["summary"]["emits"][0]["t"] == pytest.approx(0.1)


def test_batch_fps_flag_scales_timestamps(capsys, v_session_dir):
    lines = run_lines(capsys, ["batch", "--fps", "5", str(v_session_dir)])
    docs = [json.loads(line) for line in lines]
    assert docs[4]["t"] == pytest.approx(0.8)
    assert docs[5]["summary"]["a_o"] == pytest.approx(0.8 / 7.0 * 100.0)


def test_batch_accuracy_against_an_expected_file(capsys, v_session_dir, tmp_path):
    expected = tmp_path / "expected.txt"
    expected.write_text("V\nV\nV\nV\nW\n")
    lines = run_lines(capsys, ["batch", "--expected", str(expected), str(v_session_dir)])
    summary = json.loads(lines[-1])["summary"]
    assert summary["accuracy"] == pytest.approx(0.8)


def test_batch_expected_length_mismatch_exits_two(capsys, v_session_dir, tmp_path):
    expected = tmp_path / "expected.txt"
    expected.write_text("V\nV\n")
    assert main(["batch", "--expected", str(expected), str(v_session_dir)]) == 2


def test_batch_hook_file_receives_the_stable_letter(capsys, v_session_dir, tmp_path):
    letter_file = tmp_path / "letter.txt"
    run_lines(capsys, ["batch", "--hook-file", str(letter_file), str(v_session_dir)])
    assert letter_file.read_bytes() == b"V\n"


def test_batch_on_an_empty_directory_exits_two(capsys, tmp_path):
    directory = tmp_path / "empty"
    directory.mkdir()
    assert main(["batch", str(directory)]) == 2


def test_batch_on_a_missing_directory_exits_two(capsys, tmp_path):
    assert main(["batch", str(tmp_path / "gone")]) == 2


# ---------------------------------------------------------------------------
# calibrate


@pytest.fixture
def labeled_dir(tmp_path):
    directory = tmp_path / "labeled"
    directory.mkdir()
    write_pgm(directory / "a_001.pgm", letter_a())
    write_pgm(directory / "v_001.pgm", letter_v())
    write_pgm(directory / "unknown_001.pgm", background())
    (directory / "notes.txt").write_text("ignored: no letter prefix")
    return directory


def test_calibrate_writes_a_loadable_config(capsys, labeled_dir, tmp_path):
    out = tmp_path / "tuned.conf"
    assert main(["calibrate", "--out", str(out), str(labeled_dir)]) == 0
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "accuracy 1.0000 on 3 labeled frames" in captured.err
    tuned = load_config(out.read_text())
    tuned.rules.validate()
    tuned.pipeline.validate()


def test_calibrate_prints_config_to_stdout_by_default(capsys, labeled_dir):
    assert main(["calibrate", str(labeled_dir)]) == 0
    captured = capsys.readouterr()
    config = load_config(captured.out)
    assert config.pipeline.window == 5


def test_calibrate_without_labeled_frames_exits_two(capsys, tmp_path):
    directory = tmp_path / "unlabeled"
    directory.mkdir()
    (directory / "photo.txt").write_text("not a frame")
    assert main(["calibrate", str(directory)]) == 2


# ---------------------------------------------------------------------------
# serve


def wait_for_line(stream, token: str, deadline: float) -> str:
    while time.monotonic() < deadline:
        line = stream.readline()
        if token in line:
            return line
    raise AssertionError(f"server never printed {token!r}")


def test_serve_binds_a_free_port_and_answers_health():
    proc = subprocess.Popen(
        [sys.executable, "-c", "from fingerspell.cli import entrypoint; entrypoint()",
         "serve", "--port", "0"],
        stdout=subprocess.PIPE,
        stderr=subprocess.DEVNULL,
        text=True,
    )
    try:
        line = wait_for_line(proc.stdout, "listening on", time.monotonic() + 15.0)
        port = int(line.rsplit(":", 1)[1])
        url = f"http://127.0.0.1:{port}/v1/healthz"
        deadline = time.monotonic() + 15.0
        while True:
            try:
                with urllib.request.urlopen(url, timeout=2.0) as resp:
                    body = json.loads(resp.read())
                break
            except OSError:
                if time.monotonic() > deadline:
                    raise
                time.sleep(0.05)
        assert body["status"] == "ok"
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def test_serve_on_a_busy_port_exits_two(capsys):
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        result = subprocess.run(
            [sys.executable, "-c", "from fingerspell.cli import entrypoint; entrypoint()",
             "serve", "--port", str(port)],
            capture_output=True,
            text=True,
            timeout=30,
        )
        assert result.returncode == 2
        assert "cannot bind" in result.stderr
    finally:
        blocker.close()
