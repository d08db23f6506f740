use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use expander_minors::graph::families;
use expander_minors::harness::{generate, GeneratorSpec};
use expander_minors::io::write_edge_list;
use expander_minors_ffi::*;

fn edge_list_text(g: &expander_minors::graph::Graph) -> CString {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).unwrap();
    CString::new(buf).unwrap()
}

fn parse(g: &expander_minors::graph::Graph) -> *mut EmGraph {
    let text = edge_list_text(g);
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { em_graph_parse(text.as_ptr(), &mut out) },
        EmStatus::Ok
    );
    out
}

fn last_error() -> String {
    let p = em_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn graph_from_edges_and_counts() {
    let edges: [usize; 8] = [0, 1, 1, 2, 2, 3, 1, 0];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            em_graph_from_edges(4, edges.as_ptr(), 4, &mut g),
            EmStatus::Ok
        );
        assert_eq!(em_graph_vertex_count(g), 4);
        assert_eq!(em_graph_edge_count(g), 3);
        let mut d = 0.0;
        assert_eq!(em_graph_average_degree(g, &mut d), EmStatus::Ok);
        assert_eq!(d, 1.5);
        em_graph_free(g);
    }
}

#[test]
fn bad_inputs_report_codes_and_messages() {
    let mut g = ptr::null_mut();
    let loops: [usize; 2] = [1, 1];
    unsafe {
        assert_eq!(
            em_graph_from_edges(3, loops.as_ptr(), 1, &mut g),
            EmStatus::InvalidArgument
        );
        assert!(g.is_null());
        assert!(last_error().contains("self-loop"));
        assert_eq!(
            em_graph_from_edges(3, ptr::null(), 1, &mut g),
            EmStatus::NullPointer
        );
        let text = CString::new("0 x\n").unwrap();
        assert_eq!(em_graph_parse(text.as_ptr(), &mut g), EmStatus::Parse);
        assert!(last_error().contains("line 1"));
        let mut out = ptr::null_mut();
        assert_eq!(
            em_find_minor(ptr::null(), 3, 0.5, &mut out),
            EmStatus::NullPointer
        );
        assert_eq!(em_graph_vertex_count(ptr::null()), 0);
        em_graph_free(ptr::null_mut());
        em_string_free(ptr::null_mut());
    }
}

#[test]
fn minor_round_trip_through_json() {
    let host = generate(&GeneratorSpec::gnp(1000, 30.0, 3)).unwrap();
    let g = parse(&host);
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(em_find_minor(g, 4, 0.5, &mut r), EmStatus::Ok);
        assert_eq!(em_minor_branch_set_count(r), 4);
        let mut total = 0;
        for i in 0..4 {
            let (mut vs, mut len) = (ptr::null(), 0);
            assert_eq!(em_minor_branch_set(r, i, &mut vs, &mut len), EmStatus::Ok);
            assert!(len > 0);
            total += std::slice::from_raw_parts(vs, len).len();
        }
        assert_eq!(total, em_minor_total_vertices(r));
        let (mut vs, mut len) = (ptr::null(), 0);
        assert_eq!(
            em_minor_branch_set(r, 4, &mut vs, &mut len),
            EmStatus::InvalidArgument
        );

        let json = em_minor_to_json(r);
        assert!(!json.is_null());
        let mut valid = false;
        assert_eq!(em_verify_json(g, json, &mut valid), EmStatus::Ok);
        assert!(valid);
        em_string_free(json);

        // The same witness is wrong for a graph without those edges.
        let empty = CString::new("# n=1000\n").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(em_graph_parse(empty.as_ptr(), &mut h), EmStatus::Ok);
        let json = em_minor_to_json(r);
        assert_eq!(em_verify_json(h, json, &mut valid), EmStatus::Ok);
        assert!(!valid);
        em_string_free(json);
        em_graph_free(h);
        em_minor_free(r);
        em_graph_free(g);
    }
}

#[test]
fn subdivision_accessors() {
    let host = generate(&GeneratorSpec::regular(2000, 12, 4)).unwrap();
    let g = parse(&host);
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(
            em_find_subdivision(g, 3, 0.5, EmSubdivisionMode::Subdivision, &mut r),
            EmStatus::Ok
        );
        assert!(em_subdivision_is_subdivision(r));
        let (mut cs, mut len) = (ptr::null(), 0);
        assert_eq!(em_subdivision_corners(r, &mut cs, &mut len), EmStatus::Ok);
        let corners = std::slice::from_raw_parts(cs, len).to_vec();
        assert_eq!(corners.len(), 3);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (mut ps, mut plen) = (ptr::null(), 0);
            assert_eq!(
                em_subdivision_path(r, i, j, &mut ps, &mut plen),
                EmStatus::Ok
            );
            let path = std::slice::from_raw_parts(ps, plen);
            assert_eq!((path[0], path[plen - 1]), (corners[i], corners[j]));
        }
        assert!(em_subdivision_total_vertices(r) >= 3);
        let json = em_subdivision_to_json(r);
        let mut valid = false;
        assert_eq!(em_verify_json(g, json, &mut valid), EmStatus::Ok);
        assert!(valid);
        em_string_free(json);
        em_subdivision_free(r);
        em_graph_free(g);
    }
}

#[test]
fn search_without_witness_is_not_found() {
    let g = parse(&families::star(8));
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(
            em_find_subdivision(g, 3, 0.5, EmSubdivisionMode::Subdivision, &mut r),
            EmStatus::NotFound
        );
        assert!(!r.is_null());
        assert_eq!(em_subdivision_total_vertices(r), 0);
        let (mut cs, mut len) = (ptr::null(), 0);
        assert_eq!(
            em_subdivision_corners(r, &mut cs, &mut len),
            EmStatus::NotFound
        );
        em_subdivision_free(r);
        em_graph_free(g);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/expander_minors.h");
    assert!(std::path::Path::new(header).exists());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use_header.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{header}\"\nint main(void) {{ EmGraph *g = 0; size_t e[2] = {{0, 1}};\n\
             EmStatus s = em_graph_from_edges(2, e, 1, &g); em_graph_free(g); return s == EM_STATUS_OK ? 0 : 1; }}\n"
        ),
    )
    .unwrap();
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror"])
        .arg(&src)
        .status()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(status.success());
}
