n = int(input())
tmp = 1
m = 2 * tmp - 1
while n > tmp:
    tmp = tmp + 1
    m = m * n
    n = n - tmp + 1
    tmp = tmp - 1
print(m)
