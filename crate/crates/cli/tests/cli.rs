use std::io::Write;
use std::process::{Command, Output, Stdio};

use cubesplit::line::sample_uniform_complex;
use cubesplit::textio::format_complex;
use cubesplit::SeededRng;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cubesplit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // feed stdin from a thread so a large input cannot deadlock against a full stdout pipe
    let mut pipe = child.stdin.take().unwrap();
    let data = stdin.as_bytes().to_vec();
    let feeder = std::thread::spawn(move || pipe.write_all(&data));
    let out = child.wait_with_output().unwrap();
    feeder.join().unwrap().unwrap();
    out
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn numbers(s: &str) -> Vec<f64> {
    s.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

const CS2_D4: [&str; 6] = ["--scheme", "cs2", "--dim", "4", "--bits", "1,1,1,1,1,1"];
const REAL_D3: [&str; 6] = ["--scheme", "real", "--dim", "3", "--bits", "3,3"];

fn with<'a>(cmd: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(rest);
    v
}

#[test]
fn encode_examples() {
    let o = run(&with("encode", &CS2_D4), "0 0 1 0 0 0 0 0\n");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "01111111\n");

    let o = run(&with("encode", &REAL_D3), "1 0 0\n");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "00100100\n");
}

#[test]
fn replicated_bits_match_the_list_form() {
    let args = ["encode", "--scheme", "cs2", "--dim", "4", "--bits", "1"];
    assert_eq!(stdout(&run(&args, "0 0 1 0 0 0 0 0\n")), "01111111\n");
}

#[test]
fn decode_inverts_the_encode_examples() {
    let o = run(&with("decode", &REAL_D3), "00100100\n");
    assert_eq!(o.status.code(), Some(0));
    let y = numbers(&stdout(&o));
    assert_eq!(y.len(), 3);
    assert!(y[0] > y[1].abs() && y[0] > y[2].abs());
    let norm: f64 = y.iter().map(|v| v * v).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    assert_eq!(
        stdout(&run(&with("encode", &REAL_D3), &stdout(&o))),
        "00100100\n"
    );

    let o = run(&with("decode", &CS2_D4), "01111111\n");
    assert_eq!(o.status.code(), Some(0));
    let x = numbers(&stdout(&o));
    assert_eq!(x.len(), 8);
    // dominant entry is the second complex coordinate
    let mags: Vec<f64> = x.chunks(2).map(|c| c[0] * c[0] + c[1] * c[1]).collect();
    assert!(mags[1] > mags[0] && mags[1] > mags[2] && mags[1] > mags[3]);
    assert_eq!(
        stdout(&run(&with("encode", &CS2_D4), &stdout(&o))),
        "01111111\n"
    );
}

#[test]
fn malformed_codewords_are_data_errors() {
    // header "11" selects cell 4 of 3
    let args = ["decode", "--scheme", "cs2", "--dim", "3", "--bits", "1"];
    let o = run(&args, "110000\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let o = run(&with("decode", &REAL_D3), "0010010\n");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&with("decode", &REAL_D3), "0010010x\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_input_gives_empty_output() {
    for cmd in ["encode", "decode"] {
        let o = run(&with(cmd, &REAL_D3), "");
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn bad_vectors_are_data_errors() {
    for input in ["0 0 0\n", "1 0\n", "1 0 zero\n", "2 0 0\n", "nan 0 0\n"] {
        let o = run(&with("encode", &REAL_D3), input);
        assert_eq!(o.status.code(), Some(2), "input {input:?}");
    }
}

#[test]
fn near_unit_inputs_are_renormalized() {
    let o = run(&with("encode", &REAL_D3), "1.0000001 0 0\n");
    assert_eq!(stdout(&o), "00100100\n");
    assert!(o.stderr.is_empty());

    let o = run(&with("encode", &REAL_D3), "1.0005 0 0\n");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "00100100\n");
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn input_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let output = dir.path().join("out.txt");
    std::fs::write(&input, "1 0 0\n\n0 1 0\n").unwrap();
    let mut args = with("encode", &REAL_D3);
    args.extend([
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]);
    let o = run(&args, "");
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&output).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("00100100\n01"));

    let missing = dir.path().join("missing.txt");
    let mut args = with("encode", &REAL_D3);
    args.extend(["--in", missing.to_str().unwrap()]);
    assert_eq!(run(&args, "").status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    let cases: [&[&str]; 6] = [
        &["bounds", "--dim", "1", "--bits", "12"],
        &[
            "bench",
            "--scheme",
            "cs2",
            "--dim",
            "4",
            "--bits",
            "2",
            "--samples",
            "0",
        ],
        &[
            "uniformity",
            "--scheme",
            "cs2",
            "--dim",
            "4",
            "--samples",
            "99",
        ],
        &[
            "encode",
            "--scheme",
            "quaternion",
            "--dim",
            "4",
            "--bits",
            "2",
        ],
        &["encode", "--scheme", "cs2", "--dim", "4", "--bits", "2,2"],
        &["transmogrify"],
    ];
    for args in cases {
        assert_eq!(run(args, "").status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"], "").status.code(), Some(0));
}

#[test]
fn bounds_prints_two_numbers() {
    let o = run(&["bounds", "--dim", "4", "--bits", "12"], "");
    assert_eq!(o.status.code(), Some(0));
    let b = numbers(&stdout(&o));
    assert_eq!(b.len(), 2);
    assert_eq!(b[0], 0.046875);
    assert!((b[1] - 0.055_811_2).abs() < 1e-7);
    assert!(b[0] <= b[1]);
}

#[test]
fn bench_is_schema_exact_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        let args = [
            "bench",
            "--scheme",
            "cs2",
            "--dim",
            "4",
            "--bits",
            "2",
            "--bits",
            "3",
            "--samples",
            "2000",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ];
        assert_eq!(run(&args, "").status.code(), Some(0));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "scheme,D,total_bits,bits_per_dim,samples,distortion,distortion_db,stderr,lower_bound,upper_bound,seed"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("cs2,4,14,"));
    assert!(lines[2].starts_with("cs2,4,20,"));
    assert!(text.ends_with('\n'));
}

#[test]
fn uniformity_report_is_deterministic() {
    let args = [
        "uniformity",
        "--scheme",
        "cs2",
        "--dim",
        "2",
        "--samples",
        "5000",
        "--seed",
        "3",
    ];
    let a = run(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&run(&args, "")));
    // two cube coordinates, plus one |t|^2 and one |w| line
    assert_eq!(stdout(&a).lines().count(), 5);
}

#[test]
fn uniformity_holds_at_two_complex_dimensions() {
    let args = [
        "uniformity",
        "--scheme",
        "cs2",
        "--dim",
        "2",
        "--samples",
        "100000",
    ];
    let out = stdout(&run(&args, ""));
    assert!(
        out.ends_with("0 statistics above the 1% critical value\n"),
        "{out}"
    );
}

#[test]
fn uniformity_fails_at_four_complex_dimensions() {
    // the marginals are tilted once more than one ratio is conditioned on
    let args = [
        "uniformity",
        "--scheme",
        "cs2",
        "--dim",
        "4",
        "--samples",
        "100000",
    ];
    let o = run(&args, "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn encode_decode_encode_pipe_is_stable() {
    let args = ["--scheme", "cs2", "--dim", "8", "--bits", "4"];
    let mut rng = SeededRng::new(11, 0);
    let input: String = (0..2000)
        .map(|_| format_complex(sample_uniform_complex(8, &mut rng).unwrap().as_slice()) + "\n")
        .collect();
    let first = stdout(&run(&with("encode", &args), &input));
    let decoded = stdout(&run(&with("decode", &args), &first));
    let second = stdout(&run(&with("encode", &args), &decoded));
    let (a, b): (Vec<&str>, Vec<&str>) = (first.lines().collect(), second.lines().collect());
    assert_eq!(a.len(), 2000);
    assert_eq!(a.len(), b.len());
    let same = a.iter().zip(&b).filter(|(x, y)| x == y).count();
    assert!(same as f64 >= 0.999 * a.len() as f64, "{same}/2000");
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
