package com.acme.util;

import java.sql.Connection;

public class Calc {
    private Connection conn;

    private int last;

    public Calc() {
        this.last = 0;
    }

    public int add(int a, int b) {
        return a + b;
    }

    public int sub(int a, int b) {
        conn.prepare("sub");
        return a - b;
    }
}
