use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn eea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eea")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

const SMALL: &str = "seed = 4
[macro]
pop_size = 8
code_length = 8
generations = 2
[micro]
num_registers = 8
micro_generations = 6
runs_per_fitness = 4
";

fn evolve_into(dir: &Path, workers: &str) -> (String, String) {
    let cfg = dir.join("c.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let out = dir.join(format!("out{workers}"));
    let o = eea(&["evolve", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--workers", workers]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (
        std::fs::read_to_string(out.join("best.eea")).unwrap(),
        std::fs::read_to_string(out.join("history.csv")).unwrap(),
    )
}

#[test]
fn evolve_is_reproducible_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let one = evolve_into(dir.path(), "1");
    let four = evolve_into(dir.path(), "4");
    assert_eq!(one, four);
    assert!(one.0.starts_with("EEA v1\nregisters 8\ngenerations 6\n"));
    assert_eq!(one.1.lines().count(), 1 + 1 + 2 * 4);
}

#[test]
fn run_and_bench() {
    let dir = tempfile::tempdir().unwrap();
    let (program, _) = evolve_into(dir.path(), "2");
    let prog = dir.path().join("p.eea");
    std::fs::write(&prog, program).unwrap();
    let prog = prog.to_str().unwrap();

    let a = eea(&["run", prog, "f2", "--runs", "6", "--seed", "9"]);
    let b = eea(&["run", prog, "f2", "--runs", "6", "--seed", "9", "--workers", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("problem f2\nruns 6\nmean "));

    std::fs::copy(data("berlin52.tsp"), dir.path().join("berlin52.tsp")).unwrap();
    std::fs::write(dir.path().join("broken.tsp"), "NAME: x\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 zero\nEOF\n").unwrap();
    let list = dir.path().join("list.txt");
    std::fs::write(&list, "# instances\nf1\nbroken.tsp\nberlin52.tsp\n").unwrap();
    let csv = dir.path().join("bench.csv");
    let o = eea(&["bench", prog, list.to_str().unwrap(), "--runs", "3", "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.tsp"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "problem,alg,runs,mean,stddev,delta_percent");
    assert_eq!(lines.len(), 1 + 3 + 1 + 3);
    assert_eq!(lines[4], "broken.tsp,error,0,,,");
    assert!(lines[5].starts_with("berlin52,standard_ga,3,"));

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let o = eea(&["bench", prog, empty.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout), "problem,alg,runs,mean,stddev,delta_percent\n");
}

#[test]
fn render_matches_listing() {
    let dir = tempfile::tempdir().unwrap();
    let prog = dir.path().join("p.eea");
    std::fs::write(&prog, "EEA v1\nregisters 3\ngenerations 7\nPop[0] = Mutate(Pop[1]);\nPop[2] = Select(Pop[0], Pop[1]);\n").unwrap();
    let o = eea(&["render", prog.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("void LGP_Program(Chromosome Pop[3])"));
    assert!(text.contains("for (int k = 0; k < 7; k++)"));
    assert!(text.contains("        Pop[2] = Select(Pop[0], Pop[1]);\n"));
}

#[test]
fn exit_codes() {
    let missing = eea(&["run", "/definitely/not/here.eea", "f1"]);
    assert_eq!(missing.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.eea");
    std::fs::write(&bad, "EEA v1\nregisters 3\ngenerations 7\nPop[0] = Frobnicate(Pop[1]);\n").unwrap();
    let o = eea(&["render", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    // A valid program on a problem it cannot serve is a domain error.
    let prog = dir.path().join("p.eea");
    std::fs::write(&prog, "EEA v1\nregisters 3\ngenerations 2\nPop[0] = Mutate(Pop[1]);\n").unwrap();
    let o = eea(&["run", prog.to_str().unwrap(), "f1", "--runs", "1"]);
    assert_eq!(o.status.code(), Some(1));

    let cfg = dir.path().join("typo.toml");
    std::fs::write(&cfg, "[macro]\npopsize = 3\n").unwrap();
    let o = eea(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
